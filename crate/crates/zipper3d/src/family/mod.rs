//! The family `S_xi` of 2m-map zippers over the parameter box `D`.
//!
//! Vertices lie in the XY plane; only `z_{m+1}` and the maps `S_{m+1}`,
//! `S_{m+2}`, `S_{m+4}` depend on `xi = (rho, theta, phi)`.

mod build;
mod displace;
mod sets;
mod sigma;
mod verify;
mod witness;

pub use build::{
    alpha_m4, bicone_structure, build_bicones, build_vertices, build_zipper, pair_constants, BiconeSet,
    PairConstants,
};
pub use displace::{
    collage_bracket, displacement_report, transition_map, xi_frame, CollageBracket, DisplacementReport,
};
pub use sets::{sets_ab, SetBounds, SetsAB};
pub use sigma::{enumerate_sigma, sigma_pairs, SigmaSeq};
pub use verify::{verify_suite, SUITE_GROUPS};
pub use witness::{cone_setup, witness_map, wsp_search, wsp_witness, ConeSetup, WitnessScan, WspWitness};

use crate::cstar::GenPair;
use crate::error::{invalid, Result};
use crate::zipper::{LinearZipper, Signature};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `arctan(1/2)`.
pub fn beta0() -> f64 {
    0.5f64.atan()
}

pub const MU: f64 = 0.0100512;

/// Radius of the allowed generator neighbourhood of 1/6.
pub const GENERATOR_RADIUS: f64 = 0.003;

/// Step at which the default generators close up exactly.
const TUNE_STEP: f64 = 9.0;

/// Modulus detuning of the default second generator.
const TUNE_DETUNE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamXi {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

impl ParamXi {
    pub fn new(rho: f64, theta: f64, phi: f64) -> ParamXi {
        ParamXi { rho, theta, phi }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.rho, self.theta, self.phi]
    }

    pub fn dist(self, o: ParamXi) -> f64 {
        ((self.rho - o.rho).powi(2) + (self.theta - o.theta).powi(2) + (self.phi - o.phi).powi(2)).sqrt()
    }
}

/// The open box `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub rho: (f64, f64),
    pub theta: (f64, f64),
    pub phi: (f64, f64),
}

impl Domain {
    pub fn contains(&self, xi: ParamXi) -> bool {
        let inside = |v: f64, (lo, hi): (f64, f64)| v > lo && v < hi;
        inside(xi.rho, self.rho) && inside(xi.theta, self.theta) && inside(xi.phi, self.phi)
    }

    /// Point at fractional position `f` (each in (0,1)) of the box.
    pub fn at(&self, f: [f64; 3]) -> ParamXi {
        let lerp = |(lo, hi): (f64, f64), t: f64| lo + t * (hi - lo);
        ParamXi::new(lerp(self.rho, f[0]), lerp(self.theta, f[1]), lerp(self.phi, f[2]))
    }

    /// Cell centres of an `a x b x c` grid, `rho` slowest.
    pub fn grid(&self, dims: (usize, usize, usize)) -> Vec<ParamXi> {
        let c = |i: usize, n: usize| (i as f64 + 0.5) / n as f64;
        let mut out = Vec::with_capacity(dims.0 * dims.1 * dims.2);
        for i in 0..dims.0 {
            for j in 0..dims.1 {
                for k in 0..dims.2 {
                    out.push(self.at([c(i, dims.0), c(j, dims.1), c(k, dims.2)]));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    pub m: usize,
    pub q1: f64,
    pub alpha1: f64,
    pub q2m: f64,
    /// `S_{2m}` rotates by `-alpha2m`.
    pub alpha2m: f64,
    pub mu: f64,
    /// Enforce `|q e^{i alpha} - 1/6| <= 0.003` for both generators.
    pub constrain_generators: bool,
    /// Points per bicone in sampled checks.
    pub probe_points: usize,
    /// Offset into the low-discrepancy sequence used for probes.
    pub seed: u64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        let t = tuned_turn(MU);
        FamilyConfig {
            m: 12,
            q1: 1.0 / 6.0,
            alpha1: (t - MU / 2.0) / TUNE_STEP,
            q2m: (1.0 + TUNE_DETUNE) / 6.0,
            alpha2m: -t / TUNE_STEP,
            mu: MU,
            constrain_generators: true,
            probe_points: 2000,
            seed: 0,
        }
    }
}

/// Half the dihedral angle between the cones `V0_m`, `V0_{m+1}` at
/// `theta = beta0 - 0.75 mu`: the total turn the default generators make
/// before the two orbits close.
fn tuned_turn(mu: f64) -> f64 {
    let b = beta0();
    let d = b + b - 0.75 * mu;
    ((d / 2.0).tan() / b.tan()).acos()
}

impl FamilyConfig {
    pub fn beta1(&self) -> f64 {
        beta0() - 2.0 * self.mu
    }

    pub fn beta2(&self) -> f64 {
        beta0() + self.mu
    }

    pub fn domain(&self) -> Domain {
        let b = beta0();
        Domain {
            rho: (1.0 / 1.02, 1.02),
            theta: (b - self.mu, b - self.mu / 2.0),
            phi: (-self.mu, self.mu),
        }
    }

    /// The reference parameter `(1, beta0 - 0.75 mu, 0)`.
    pub fn xi0(&self) -> ParamXi {
        ParamXi::new(1.0, beta0() - 0.75 * self.mu, 0.0)
    }

    /// Parameter at which the default generators give an exact WSP witness.
    pub fn witness_xi(&self) -> ParamXi {
        ParamXi::new(1.0, beta0() - 0.75 * self.mu, self.mu / 2.0)
    }

    pub fn generators(&self) -> Result<GenPair> {
        GenPair::from_polar(self.q1, self.alpha1, self.q2m, self.alpha2m)
    }

    pub fn check(&self) -> Result<()> {
        if self.m < 12 {
            return invalid(format!("m = {} < 12", self.m));
        }
        if !(self.mu > 0.0 && self.mu < 0.1) {
            return invalid(format!("mu = {} outside (0, 0.1)", self.mu));
        }
        for (name, q) in [("q1", self.q1), ("q2m", self.q2m)] {
            if !(q > 0.0 && q < 1.0 / 3.0) {
                return invalid(format!("{name} = {q} outside (0, 1/3)"));
            }
        }
        if self.constrain_generators {
            for (name, q, a) in [("q1", self.q1, self.alpha1), ("q2m", self.q2m, self.alpha2m)] {
                let d = (Complex64::from_polar(q, a) - 1.0 / 6.0).norm();
                if d > GENERATOR_RADIUS {
                    return invalid(format!("generator {name} is {d} from 1/6 (limit {GENERATOR_RADIUS})"));
                }
            }
        }
        if self.probe_points == 0 {
            return invalid("probe_points must be positive");
        }
        Ok(())
    }

    pub fn check_xi(&self, xi: ParamXi) -> Result<()> {
        let d = self.domain();
        if !d.contains(xi) {
            return Err(crate::Error::OutOfDomain(format!(
                "xi = ({}, {}, {}) outside D = ({:?}, {:?}, {:?})",
                xi.rho, xi.theta, xi.phi, d.rho, d.theta, d.phi
            )));
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        Signature::with_reversed(2 * self.m, &[self.m + 4]).expect("m + 4 <= 2m")
    }

    /// The linear zipper with ratios `q_i^s` at `xi0`, `s` the similarity
    /// dimension there; shared by every member of the family.
    pub fn linear_zipper(&self) -> Result<LinearZipper> {
        let z = build_zipper(self, self.xi0())?;
        let q = z.ratios();
        let s = crate::zipper::similarity_dimension(&q)?;
        LinearZipper::from_powers(&q, s, self.signature())
    }
}
