//! Append-only event log of one dialogue.
//!
//! The text form has one event per line:
//!
//! ```text
//! kind<TAB>round-or-dash<TAB>key=value key=value ...
//! ```
//!
//! Kinds are `transmission`, `decoy`, `check`, `abort`, `announce`, `k_hat`
//! and `i_hat`. Floats use Rust's shortest round-trip formatting, so
//! [`Transcript::from_text`] restores the exact values.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::channel::Leg;
use crate::dfs::LogicalLabel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranscriptError {
    #[error("transcript is closed after an abort")]
    Closed,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    First,
    Second,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::First => "first",
            Check::Second => "second",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// A sequence of `items` logical qubits crossed the channel.
    Transmission { leg: Leg, items: usize },
    /// Verdict on decoy `index` of a check, at sequence position `position`.
    Decoy {
        check: Check,
        index: usize,
        position: usize,
        pass: bool,
    },
    Check {
        check: Check,
        tested: usize,
        errors: usize,
        rate: f64,
        threshold: f64,
        abort: bool,
        vacuous: bool,
    },
    Abort { reason: String },
    Announcement { round: usize, label: LogicalLabel },
    DecodedK { round: usize, bit: bool },
    DecodedI { round: usize, bit: bool },
}

impl Event {
    fn kind(&self) -> &'static str {
        match self {
            Event::Transmission { .. } => "transmission",
            Event::Decoy { .. } => "decoy",
            Event::Check { .. } => "check",
            Event::Abort { .. } => "abort",
            Event::Announcement { .. } => "announce",
            Event::DecodedK { .. } => "k_hat",
            Event::DecodedI { .. } => "i_hat",
        }
    }

    fn round(&self) -> Option<usize> {
        match self {
            Event::Announcement { round, .. }
            | Event::DecodedK { round, .. }
            | Event::DecodedI { round, .. } => Some(*round),
            _ => None,
        }
    }

    fn payload(&self) -> String {
        match self {
            Event::Transmission { leg, items } => format!("leg={} items={items}", leg.name()),
            Event::Decoy {
                check,
                index,
                position,
                pass,
            } => format!(
                "check={} index={index} position={position} pass={pass}",
                check.name()
            ),
            Event::Check {
                check,
                tested,
                errors,
                rate,
                threshold,
                abort,
                vacuous,
            } => format!(
                "check={} tested={tested} errors={errors} rate={rate:?} threshold={threshold:?} abort={abort} vacuous={vacuous}",
                check.name()
            ),
            // Reasons are free text and go last, with spaces kept.
            Event::Abort { reason } => format!("reason={reason}"),
            Event::Announcement { label, .. } => format!("label={label}"),
            Event::DecodedK { bit, .. } | Event::DecodedI { bit, .. } => {
                format!("bit={}", *bit as u8)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Transcript {
    events: Vec<Event>,
    closed: bool,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an event. An abort closes the transcript.
    pub fn push(&mut self, event: Event) -> Result<(), TranscriptError> {
        if self.closed {
            return Err(TranscriptError::Closed);
        }
        self.closed = matches!(event, Event::Abort { .. });
        self.events.push(event);
        Ok(())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            let round = e.round().map_or_else(|| "-".to_string(), |r| r.to_string());
            let _ = writeln!(out, "{}\t{}\t{}", e.kind(), round, e.payload());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, TranscriptError> {
        let mut t = Transcript::new();
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |msg: String| TranscriptError::Parse { line: n + 1, msg };
            let event = parse_line(line).map_err(err)?;
            t.push(event).map_err(|e| TranscriptError::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(t)
    }
}

fn parse_line(line: &str) -> Result<Event, String> {
    let mut cols = line.splitn(3, '\t');
    let kind = cols.next().ok_or("missing kind")?;
    let round = cols.next().ok_or("missing round column")?;
    let payload = cols.next().unwrap_or("");
    let round = || -> Result<usize, String> {
        round.parse().map_err(|_| format!("bad round {round:?}"))
    };

    if kind == "abort" {
        let reason = payload.strip_prefix("reason=").ok_or("abort without reason")?;
        return Ok(Event::Abort {
            reason: reason.to_string(),
        });
    }

    let fields: HashMap<&str, &str> = payload
        .split(' ')
        .filter(|f| !f.is_empty())
        .map(|f| f.split_once('=').ok_or(format!("field {f:?} has no '='")))
        .collect::<Result<_, _>>()?;
    let get = |k: &str| fields.get(k).copied().ok_or(format!("missing field {k}"));
    fn num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
        s.parse().map_err(|_| format!("bad number {s:?}"))
    }
    let flag = |k: &str| -> Result<bool, String> {
        match get(k)? {
            "true" | "1" => Ok(true),
            "false" | "0" => Ok(false),
            other => Err(format!("bad flag {other:?}")),
        }
    };
    let check = || -> Result<Check, String> {
        match get("check")? {
            "first" => Ok(Check::First),
            "second" => Ok(Check::Second),
            other => Err(format!("bad check {other:?}")),
        }
    };

    Ok(match kind {
        "transmission" => Event::Transmission {
            leg: match get("leg")? {
                "first" => Leg::First,
                "second" => Leg::Second,
                other => return Err(format!("bad leg {other:?}")),
            },
            items: num(get("items")?)?,
        },
        "decoy" => Event::Decoy {
            check: check()?,
            index: num(get("index")?)?,
            position: num(get("position")?)?,
            pass: flag("pass")?,
        },
        "check" => Event::Check {
            check: check()?,
            tested: num(get("tested")?)?,
            errors: num(get("errors")?)?,
            rate: num(get("rate")?)?,
            threshold: num(get("threshold")?)?,
            abort: flag("abort")?,
            vacuous: flag("vacuous")?,
        },
        "announce" => Event::Announcement {
            round: round()?,
            label: get("label")?.parse()?,
        },
        "k_hat" => Event::DecodedK {
            round: round()?,
            bit: flag("bit")?,
        },
        "i_hat" => Event::DecodedI {
            round: round()?,
            bit: flag("bit")?,
        },
        other => return Err(format!("unknown event kind {other:?}")),
    })
}
