pub mod analytic;
pub mod cli;
pub mod exactq;
pub mod identities;
pub mod padicint;
pub mod qbern;
