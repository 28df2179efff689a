//! Seeded random instances for the verification suites.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{CoordinateChange, NormalForm};
use crate::devmap::DevelopingMap;
use crate::series::LaurentSeries;
use crate::symmetry::{Family, SymmetryElement};

/// Radius of the disk the free M3 coefficient is drawn from. The M3 series
/// loses radius of convergence as this coefficient grows.
pub const M3_COEFFICIENT_RADIUS: f64 = 0.5;

/// Which normal form a random developing map is built to reduce to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Nonzero holonomy.
    ConicalGeneric,
    /// No holonomy, no log term.
    ConicalInteger,
    Cylindrical,
    LogPole(u32),
}

impl Branch {
    pub const ALL: [Branch; 6] = [
        Branch::ConicalGeneric,
        Branch::ConicalInteger,
        Branch::Cylindrical,
        Branch::LogPole(1),
        Branch::LogPole(2),
        Branch::LogPole(3),
    ];
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::ConicalGeneric => f.write_str("conical (alpha in (0,1))"),
            Branch::ConicalInteger => f.write_str("conical (integer beta)"),
            Branch::Cylindrical => f.write_str("cylindrical"),
            Branch::LogPole(n) => write!(f, "log pole (n = {n})"),
        }
    }
}

/// Deterministic generator of maps, changes and symmetry elements.
///
/// `tail` scales the higher coefficients: the coefficient of relative degree
/// `k >= 1` is drawn from the disk of radius `tail * 2^(1-k)`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, lo: i32, hi_inclusive: i32) -> i32 {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn phase(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.uniform(-PI, PI))
    }

    /// Uniform point of the disk of radius `radius`.
    pub fn in_disk(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.uniform(0.0, 1.0).sqrt();
        Complex64::from_polar(r, self.uniform(-PI, PI))
    }

    /// Random modulus in `[lo, hi]` with a random phase.
    pub fn annular(&mut self, lo: f64, hi: f64) -> Complex64 {
        let r = self.uniform(lo, hi);
        self.phase() * r
    }

    /// `w^valuation (lead + c_1 w + ... )` with `len` retained coefficients.
    pub fn series(&mut self, valuation: i32, lead: Complex64, len: i32, tail: f64) -> LaurentSeries {
        let mut coeffs = vec![lead];
        for k in 1..len {
            coeffs.push(self.in_disk(tail * 0.5f64.powi(k - 1)));
        }
        LaurentSeries::new(valuation, coeffs, valuation + len).expect("valid random series")
    }

    /// Unit series with `|h(0)|` in `[0.5, 2]`.
    pub fn unit_series(&mut self, order: i32, tail: f64) -> LaurentSeries {
        let lead = self.annular(0.5, 2.0);
        self.series(0, lead, order, tail)
    }

    pub fn change(&mut self, order: i32, tail: f64) -> CoordinateChange {
        CoordinateChange::new(self.unit_series(order, tail)).expect("unit series")
    }

    /// A developing map of the given branch; `psi` keeps `order` coefficients
    /// past its leading term.
    pub fn map(&mut self, branch: Branch, order: i32, tail: f64) -> DevelopingMap {
        let map = match branch {
            Branch::ConicalGeneric => {
                let alpha = self.uniform(0.1, 0.9);
                let m = self.index(-2, 2);
                let lead = self.annular(0.5, 2.0);
                DevelopingMap::with_holonomy(alpha, self.series(m, lead, order, tail))
            }
            Branch::ConicalInteger => {
                let m = *[-3, -2, -1, 0, 1, 2, 3]
                    .get(self.index(0, 6) as usize)
                    .expect("in range");
                let psi = if m == 0 {
                    // constant plus a higher power: reduced by a translation
                    let shift = self.annular(0.5, 2.0);
                    let j = self.index(1, 3);
                    let lead = self.annular(0.5, 2.0);
                    let rest = self.series(j, lead, order - j, tail);
                    &LaurentSeries::constant(shift, order) + &rest
                } else {
                    let lead = self.annular(0.5, 2.0);
                    self.series(m, lead, order, tail)
                };
                DevelopingMap::with_holonomy(0.0, psi)
            }
            Branch::Cylindrical => {
                let c = self.annular(0.5, 3.0);
                let lead = self.in_disk(2.0);
                DevelopingMap::logarithmic(c, self.series(0, lead, order, tail))
            }
            Branch::LogPole(n) => {
                let c = self.annular(0.3, 1.0);
                let lead = self.annular(1.0, 2.0);
                DevelopingMap::logarithmic(c, self.series(-(n as i32), lead, order, tail))
            }
        };
        map.expect("random maps are valid")
    }

    /// A normal form carrying the given symmetry family.
    pub fn form_for(&mut self, family: Family) -> NormalForm {
        match family {
            Family::M1Generic => NormalForm::Conical {
                beta: self.uniform(-2.9, 2.0),
            },
            Family::M1Integer => NormalForm::Conical {
                beta: -(self.index(2, 4) as f64),
            },
            Family::M2 => NormalForm::Cylindrical {
                c: self.uniform(0.5, 3.0),
            },
            Family::M3 => NormalForm::LogPole {
                nu: self.uniform(0.3, 1.0),
                n: self.index(1, 3) as u32,
            },
        }
    }

    /// A random element of `family` acting on `form`.
    pub fn element(&mut self, family: Family, form: &NormalForm) -> SymmetryElement {
        match family {
            Family::M1Generic => SymmetryElement::M1Generic { lambda: self.phase() },
            Family::M1Integer => SymmetryElement::M1Integer {
                lambda: self.phase(),
                zeta: self.in_disk(1.0),
            },
            Family::M2 => SymmetryElement::M2 {
                p: self.annular(0.5, 2.0),
            },
            Family::M3 => {
                let n = match form {
                    NormalForm::LogPole { n, .. } => *n,
                    _ => 1,
                };
                SymmetryElement::M3 {
                    ek_index: self.index(0, n as i32 - 1) as u32,
                    a: self.in_disk(M3_COEFFICIENT_RADIUS),
                }
            }
        }
    }
}
