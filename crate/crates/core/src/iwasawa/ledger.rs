use std::fmt;
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};

use super::IwasawaError;
use crate::curves::Reduction;

/// A local `Z_p`-corank, known exactly or only from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Corank {
    Exact(i64),
    AtLeast(LowerBound),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerBound {
    pub at_least: i64,
}

impl Corank {
    pub fn at_least(n: i64) -> Self {
        Corank::AtLeast(LowerBound { at_least: n })
    }

    fn interval(self) -> Interval {
        match self {
            Corank::Exact(n) => Interval::exact(n),
            Corank::AtLeast(b) => Interval {
                lo: Some(b.at_least),
                hi: None,
            },
        }
    }

    fn floor(self) -> i64 {
        match self {
            Corank::Exact(n) => n,
            Corank::AtLeast(b) => b.at_least,
        }
    }
}

/// Integer interval; `None` ends are unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub fn exact(n: i64) -> Self {
        Self {
            lo: Some(n),
            hi: Some(n),
        }
    }

    pub fn as_exact(&self) -> Option<i64> {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo.zip(rhs.lo).map(|(a, b)| a + b),
            hi: self.hi.zip(rhs.hi).map(|(a, b)| a + b),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.map(|h| -h),
            hi: self.lo.map(|l| -l),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) if a == b => write!(f, "= {a}"),
            (Some(a), Some(b)) => write!(f, "in [{a}, {b}]"),
            (Some(a), None) => write!(f, ">= {a}"),
            (None, Some(b)) => write!(f, "<= {b}"),
            (None, None) => f.write_str("unconstrained"),
        }
    }
}

/// A place of the imprimitivity set with the coranks `σ_{E1}^{(v)}` and `σ_{E2}^{(v)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Omega0Place {
    pub label: String,
    #[serde(default)]
    pub over_p: bool,
    pub sigma_1: Corank,
    pub sigma_2: Corank,
}

/// Two `p`-congruent curves: `λ(E1/K∞)` and the imprimitivity data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaLedger {
    pub p: u64,
    pub lambda_1: i64,
    #[serde(default)]
    pub omega0: Vec<Omega0Place>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaDifference {
    /// `Σ_v (σ_1 - σ_2)`.
    pub sigma_difference: Interval,
    /// `λ(E2/K∞)`, clipped below at 0.
    pub lambda_2: Interval,
    /// `λ(E1) + Σ σ_1 = λ(E2) + Σ σ_2`, the common imprimitive λ.
    pub imprimitive_lambda: Interval,
}

impl LambdaLedger {
    pub fn validate(&self) -> Result<(), IwasawaError> {
        if self.lambda_1 < 0 {
            return Err(IwasawaError::InvalidLedger(format!(
                "lambda_1 = {} is negative",
                self.lambda_1
            )));
        }
        for v in &self.omega0 {
            if v.over_p {
                return Err(IwasawaError::InvalidLedger(format!(
                    "place {} lies over p",
                    v.label
                )));
            }
            for s in [v.sigma_1, v.sigma_2] {
                if s.floor() < 0 {
                    return Err(IwasawaError::InvalidCorank(v.label.clone()));
                }
            }
        }
        Ok(())
    }

    /// The same ledger seen from the second curve.
    pub fn swapped(&self, lambda_2: i64) -> LambdaLedger {
        LambdaLedger {
            p: self.p,
            lambda_1: lambda_2,
            omega0: self
                .omega0
                .iter()
                .map(|v| Omega0Place {
                    sigma_1: v.sigma_2,
                    sigma_2: v.sigma_1,
                    ..v.clone()
                })
                .collect(),
        }
    }
}

/// `λ2 = λ1 + Σ_{v ∈ Ω0} (σ_1^{(v)} - σ_2^{(v)})`, as an interval when some
/// coranks are only bounded.
pub fn lambda_difference(ledger: &LambdaLedger) -> Result<LambdaDifference, IwasawaError> {
    ledger.validate()?;
    let zero = Interval::exact(0);
    let sigma_difference = ledger.omega0.iter().fold(zero, |acc, v| {
        acc + v.sigma_1.interval() + -v.sigma_2.interval()
    });
    let raw = Interval::exact(ledger.lambda_1) + sigma_difference;
    if raw.hi.is_some_and(|h| h < 0) {
        return Err(IwasawaError::InvalidLedger(
            "coranks force a negative lambda_2".into(),
        ));
    }
    let lambda_2 = Interval {
        lo: Some(raw.lo.unwrap_or(0).max(0)),
        hi: raw.hi,
    };
    let sum_1 = ledger
        .omega0
        .iter()
        .fold(zero, |acc, v| acc + v.sigma_1.interval());
    Ok(LambdaDifference {
        sigma_difference,
        lambda_2,
        imprimitive_lambda: Interval::exact(ledger.lambda_1) + sum_1,
    })
}

/// Lower bound on `σ_{E1}^{(v)} - σ_{E2}^{(v)}` at a place where `E1` is good
/// and `E2` is bad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaBound {
    pub lower: i64,
    /// Reduction type of `E2` that the hypotheses force, if any.
    pub forced_reduction: Option<Reduction>,
}

pub fn sigma_diff_bound(
    e1: Reduction,
    e2: Reduction,
    frobenius_trivial_on_e1_p: bool,
    finitely_decomposed: bool,
) -> Result<SigmaBound, IwasawaError> {
    if !finitely_decomposed {
        return Err(IwasawaError::NotInSigma);
    }
    if e1 != Reduction::Good || e2 == Reduction::Good {
        return Err(IwasawaError::NotApplicable);
    }
    if !frobenius_trivial_on_e1_p {
        return Ok(SigmaBound {
            lower: 0,
            forced_reduction: None,
        });
    }
    match e2 {
        Reduction::SplitMultiplicative => Ok(SigmaBound {
            lower: 1,
            forced_reduction: Some(Reduction::SplitMultiplicative),
        }),
        other => Err(IwasawaError::ContradictsLemma(other)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposition {
    FinitelyDecomposed,
    InfinitelyDecomposed,
}

/// In the anticyclotomic `Z_p`-extension of an imaginary quadratic field a
/// rational prime `l` has finitely many places above it iff `l = p` or `l`
/// splits in `K`.
pub fn anticyclotomic_sigma_class(l: u64, splits_in_k: bool, p: u64) -> Decomposition {
    if l == p || splits_in_k {
        Decomposition::FinitelyDecomposed
    } else {
        Decomposition::InfinitelyDecomposed
    }
}

/// Ledger for `E: y^2 = x^3 - x` against a family member with bad reduction
/// at the given primes, over `K = Q(i)` and `p = 5`: two places above each
/// split prime, each with `σ_E >= 1` and `σ_{E_t} = 0`.
pub fn congruence_ledger(lambda_e: i64, primes: &[u64]) -> Result<LambdaLedger, IwasawaError> {
    const P: u64 = 5;
    let mut omega0 = Vec::new();
    for &l in primes {
        let splits = l % 4 == 1;
        if anticyclotomic_sigma_class(l, splits, P) != Decomposition::FinitelyDecomposed || l == P {
            return Err(IwasawaError::NotInSigma);
        }
        let bound = sigma_diff_bound(Reduction::Good, Reduction::SplitMultiplicative, true, true)?;
        for side in ["+", "-"] {
            omega0.push(Omega0Place {
                label: format!("{l}{side}"),
                over_p: false,
                sigma_1: Corank::at_least(bound.lower),
                sigma_2: Corank::Exact(0),
            });
        }
    }
    Ok(LambdaLedger {
        p: P,
        lambda_1: lambda_e,
        omega0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn place(label: &str, s1: Corank, s2: Corank) -> Omega0Place {
        Omega0Place {
            label: label.into(),
            over_p: false,
            sigma_1: s1,
            sigma_2: s2,
        }
    }

    #[test]
    fn equal_coranks_leave_lambda_unchanged() {
        let ledger = LambdaLedger {
            p: 5,
            lambda_1: 3,
            omega0: vec![place("v", Corank::Exact(2), Corank::Exact(2))],
        };
        let d = lambda_difference(&ledger).unwrap();
        assert_eq!(d.lambda_2, Interval::exact(3));
        assert_eq!(d.sigma_difference, Interval::exact(0));
    }

    #[test]
    fn exact_examples() {
        let two = LambdaLedger {
            p: 5,
            lambda_1: 0,
            omega0: vec![
                place("v1", Corank::Exact(1), Corank::Exact(0)),
                place("v2", Corank::Exact(1), Corank::Exact(0)),
            ],
        };
        assert_eq!(
            lambda_difference(&two).unwrap().lambda_2.as_exact(),
            Some(2)
        );
        let one = LambdaLedger {
            p: 5,
            lambda_1: 1,
            omega0: vec![place("v", Corank::Exact(2), Corank::Exact(0))],
        };
        let d = lambda_difference(&one).unwrap();
        assert_eq!(d.lambda_2.as_exact(), Some(3));
        assert_eq!(d.imprimitive_lambda.as_exact(), Some(3));
    }

    #[test]
    fn bounded_coranks_give_the_published_bound() {
        let ledger = congruence_ledger(0, &[63241, 63901]).unwrap();
        assert_eq!(ledger.omega0.len(), 4);
        let d = lambda_difference(&ledger).unwrap();
        assert_eq!(
            d.lambda_2,
            Interval {
                lo: Some(4),
                hi: None
            }
        );
        assert_eq!(d.lambda_2.to_string(), ">= 4");
        assert!(matches!(
            congruence_ledger(0, &[63247]),
            Err(IwasawaError::NotInSigma)
        ));
    }

    #[test]
    fn unknown_second_corank_only_bounds_from_above() {
        let ledger = LambdaLedger {
            p: 5,
            lambda_1: 2,
            omega0: vec![place("v", Corank::Exact(1), Corank::at_least(0))],
        };
        let d = lambda_difference(&ledger).unwrap();
        assert_eq!(
            d.lambda_2,
            Interval {
                lo: Some(0),
                hi: Some(3)
            }
        );
    }

    #[test]
    fn negative_coranks_are_rejected() {
        let ledger = LambdaLedger {
            p: 5,
            lambda_1: 0,
            omega0: vec![place("bad", Corank::Exact(-1), Corank::Exact(0))],
        };
        assert_eq!(
            lambda_difference(&ledger),
            Err(IwasawaError::InvalidCorank("bad".into()))
        );
        let forced_negative = LambdaLedger {
            p: 5,
            lambda_1: 0,
            omega0: vec![place("v", Corank::Exact(0), Corank::Exact(1))],
        };
        assert!(matches!(
            lambda_difference(&forced_negative),
            Err(IwasawaError::InvalidLedger(_))
        ));
    }

    #[test]
    fn lemma_cases() {
        use Reduction::*;
        assert_eq!(
            sigma_diff_bound(Good, SplitMultiplicative, true, true).unwrap(),
            SigmaBound {
                lower: 1,
                forced_reduction: Some(SplitMultiplicative)
            }
        );
        assert_eq!(
            sigma_diff_bound(Good, SplitMultiplicative, false, true)
                .unwrap()
                .lower,
            0
        );
        assert_eq!(
            sigma_diff_bound(Good, Additive, false, true).unwrap().lower,
            0
        );
        assert_eq!(
            sigma_diff_bound(Good, Additive, true, true),
            Err(IwasawaError::ContradictsLemma(Additive))
        );
        assert_eq!(
            sigma_diff_bound(Good, NonsplitMultiplicative, true, true),
            Err(IwasawaError::ContradictsLemma(NonsplitMultiplicative))
        );
        assert_eq!(
            sigma_diff_bound(Good, SplitMultiplicative, true, false),
            Err(IwasawaError::NotInSigma)
        );
        assert_eq!(
            sigma_diff_bound(Good, Good, true, true),
            Err(IwasawaError::NotApplicable)
        );
        assert_eq!(
            sigma_diff_bound(Additive, SplitMultiplicative, true, true),
            Err(IwasawaError::NotApplicable)
        );
    }

    #[test]
    fn decomposition_classes() {
        use Decomposition::*;
        assert_eq!(anticyclotomic_sigma_class(5, false, 5), FinitelyDecomposed);
        assert_eq!(anticyclotomic_sigma_class(13, true, 5), FinitelyDecomposed);
        assert_eq!(
            anticyclotomic_sigma_class(7, false, 5),
            InfinitelyDecomposed
        );
    }

    #[test]
    fn corank_serialization() {
        let v = place("v", Corank::at_least(1), Corank::Exact(0));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"label":"v","over_p":false,"sigma_1":{"at_least":1},"sigma_2":0}"#
        );
        assert_eq!(serde_json::from_str::<Omega0Place>(&json).unwrap(), v);
    }
}
