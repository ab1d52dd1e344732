pub mod abp;
pub mod automata;
pub mod harness;
pub mod spf;
pub mod stream;
pub mod timed;
