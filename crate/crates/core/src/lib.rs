//! Electron-mirror duality: kinematics, moving-mirror Bogolubov spectra,
//! point-charge radiation spectra and thermality checks for four rectilinear
//! trajectories.
//!
//! Energies, powers and temperatures are per unit e² on the electron side and
//! per unit ħ on the mirror side, so the two agree numerically.

pub mod electron;
pub mod energy;
pub mod error;
pub mod kinematics;
pub mod mirror;
pub mod numerics;
pub mod thermal;

pub use electron::{PhotonMode, SpectralGrid, SpectralMethod};
pub use energy::{EnergyReport, PairwiseDifference};
pub use error::{Error, Result};
pub use kinematics::{KinematicState, LightconePoint, Trajectory, WdParametrization};
pub use mirror::{DfBetaTerms, ModePair, ParticleSpectrum};
pub use numerics::{ComplexValue, Domain, QuadratureConfig, SemiInfiniteMap};
pub use thermal::{
    TemperatureKind, TemperatureReference, TemperatureScale, ThermalFit, Verdict,
};
