//! Parameterised Boolean equation systems: syntax, normal forms, instantiation
//! to parity games and solving.

pub mod buffer;
pub mod formula;
pub mod game;
pub mod instantiate;
pub mod normal_form;
pub mod oracle;
pub mod pbes;
pub mod random;
pub mod rewrite;
pub mod sort;
pub mod syntax;
pub mod term;
