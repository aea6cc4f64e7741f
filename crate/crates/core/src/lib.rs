//! Exact dessin correlators from two routes: Virasoro recursion in the x-picture
//! and Eynard-Orantin residues on the spectral curve in the z-picture.

pub mod airy;
pub mod algebra;
pub mod closed_forms;
pub mod eo;
pub mod npoint;
pub mod properties;
pub mod report;
pub mod suites;
pub mod virasoro;
