pub mod adversary;
pub mod analysis;
pub mod channel;
pub mod cli;
pub mod dfs;
pub mod protocol;
pub mod qcore;
