#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;
pub mod atomic;
pub mod complex;
pub mod elements;
pub mod featurize;
pub mod hash;
pub mod linalg;
pub mod math;
pub mod polyatomic;
pub mod rng;
pub mod smiles;
