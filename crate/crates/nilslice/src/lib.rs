pub mod hilbert;
pub mod kernel;
pub mod liealg;
pub mod sampling;
pub mod slices;
pub mod spectra;
pub mod transversality;
