#[allow(dead_code)]
pub mod laws;
#[allow(dead_code)]
pub mod corpus;
