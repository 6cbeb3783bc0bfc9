//! Named fixtures with exact rational entries.
//!
//! `paper_ppt_state` is the 3⊗3 bound-entangled PPT state and
//! `paper_mub_witness` the four-MUB witness that detects it, both stored as
//! integer numerators over a common denominator.

use std::fmt;
use std::str::FromStr;

use super::{io, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Dims, C64, ZERO};
use crate::witnesses::Witness;

struct RationalMatrix {
    dim: usize,
    denominator: i64,
    numerators: &'static [i64],
}

impl RationalMatrix {
    fn to_matrix(&self) -> ComplexMatrix {
        let den = self.denominator as f64;
        ComplexMatrix::from_fn(self.dim, self.dim, |i, j| {
            C64::new(self.numerators[i * self.dim + j] as f64 / den, 0.0)
        })
    }
}

#[rustfmt::skip]
const PPT_STATE: RationalMatrix = RationalMatrix {
    dim: 9,
    denominator: 15,
    numerators: &[
        1,  0,  0,  0,  1,  0,  0,  0,  1,
        0,  2,  0,  0,  0, -1, -1,  0,  0,
        0,  0,  2, -1,  0,  0,  0, -1,  0,
        0,  0, -1,  2,  0,  0,  0, -1,  0,
        1,  0,  0,  0,  1,  0,  0,  0,  1,
        0, -1,  0,  0,  0,  2, -1,  0,  0,
        0, -1,  0,  0,  0, -1,  2,  0,  0,
        0,  0, -1, -1,  0,  0,  0,  2,  0,
        1,  0,  0,  0,  1,  0,  0,  0,  1,
    ],
};

#[rustfmt::skip]
const MUB_WITNESS: RationalMatrix = RationalMatrix {
    dim: 9,
    denominator: 3,
    numerators: &[
         4,  0,  0,  0, -1,  0,  0,  0, -1,
         0,  1,  0,  0,  0,  2,  2,  0,  0,
         0,  0,  1,  2,  0,  0,  0,  2,  0,
         0,  0,  2,  1,  0,  0,  0,  2,  0,
        -1,  0,  0,  0,  4,  0,  0,  0, -1,
         0,  2,  0,  0,  0,  1,  2,  0,  0,
         0,  2,  0,  0,  0,  2,  1,  0,  0,
         0,  0,  2,  2,  0,  0,  0,  1,  0,
        -1,  0,  0,  0, -1,  0,  0,  0,  4,
    ],
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    PaperPptState,
    PaperMubWitness,
    /// Projector onto (|00⟩ + … + |d−1,d−1⟩)/√d.
    Bell(usize),
    /// (|01⟩ − |10⟩)/√2
    Singlet,
}

impl Fixture {
    pub const NAMES: &'static [&'static str] =
        &["paper_ppt_state", "paper_mub_witness", "bell(d)", "singlet"];

    pub fn build(self) -> Result<FixtureValue> {
        Ok(match self {
            Fixture::PaperPptState => FixtureValue::State(DensityMatrix::new(
                Dims::square(3),
                PPT_STATE.to_matrix(),
            )?),
            Fixture::PaperMubWitness => {
                FixtureValue::Witness(Witness::new(Dims::square(3), MUB_WITNESS.to_matrix())?)
            }
            Fixture::Bell(d) => FixtureValue::State(bell_state(d)?),
            Fixture::Singlet => {
                let m = ComplexMatrix::from_fn(4, 4, |i, j| match (i, j) {
                    (1, 1) | (2, 2) => C64::new(0.5, 0.0),
                    (1, 2) | (2, 1) => C64::new(-0.5, 0.0),
                    _ => ZERO,
                });
                FixtureValue::State(DensityMatrix::new(Dims::square(2), m)?)
            }
        })
    }
}

fn bell_state(d: usize) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::Domain("bell(d) needs d ≥ 1".into()));
    }
    let entry = C64::new(1.0 / d as f64, 0.0);
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            entry
        } else {
            ZERO
        }
    });
    DensityMatrix::new(Dims::square(d), m)
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim();
        match name {
            "paper_ppt_state" => return Ok(Fixture::PaperPptState),
            "paper_mub_witness" => return Ok(Fixture::PaperMubWitness),
            "singlet" => return Ok(Fixture::Singlet),
            _ => {}
        }
        let arg = name
            .strip_prefix("bell")
            .map(|rest| rest.trim_start_matches(['(', ':', '_']).trim_end_matches(')'));
        match arg.and_then(|a| a.parse::<usize>().ok()) {
            Some(d) if d >= 1 => Ok(Fixture::Bell(d)),
            _ => Err(Error::UnknownFixture(s.to_owned())),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::PaperPptState => f.write_str("paper_ppt_state"),
            Fixture::PaperMubWitness => f.write_str("paper_mub_witness"),
            Fixture::Bell(d) => write!(f, "bell({d})"),
            Fixture::Singlet => f.write_str("singlet"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum FixtureValue {
    State(DensityMatrix),
    Witness(Witness),
}

impl FixtureValue {
    pub fn into_state(self) -> Option<DensityMatrix> {
        match self {
            FixtureValue::State(s) => Some(s),
            FixtureValue::Witness(_) => None,
        }
    }

    pub fn into_witness(self) -> Option<Witness> {
        match self {
            FixtureValue::Witness(w) => Some(w),
            FixtureValue::State(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            FixtureValue::State(s) => io::state_to_json(s),
            FixtureValue::Witness(w) => io::witness_to_json(w),
        }
    }
}

pub fn fixture(name: &str) -> Result<FixtureValue> {
    name.parse::<Fixture>()?.build()
}
