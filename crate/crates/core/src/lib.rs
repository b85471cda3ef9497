//! Monadic bimodal (`<>` / `E`) logics over finite 2-frames: frame
//! classes and constructions, the box-plus translation, selective
//! filtration, and bounded countermodel search.

pub mod frame;
pub mod formula;
pub mod semantics;
pub mod filtration;
pub mod decision;
pub mod io;
