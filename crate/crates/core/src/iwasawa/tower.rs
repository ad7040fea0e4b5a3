use std::fmt;

use serde::{Deserialize, Serialize};

use super::IwasawaError;
use crate::arith::is_prime_u64;
use crate::curves::Reduction;

/// A place `w'` of `L∞` together with the data the λ formula needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceDatum {
    pub label: String,
    /// Label of the prime of `K` below this place; only used to group output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub above: Option<String>,
    pub over_p: bool,
    /// Ramification index in `L∞/K∞`.
    pub e: u64,
    pub reduction: Reduction,
    /// Optional in input; must agree with `e > 1` when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramified_over_base: Option<bool>,
    /// `E(L∞,w')` has a point of order `p`.
    pub has_p_torsion_locally: bool,
    /// Lies over a prime of `K` that is finitely decomposed in `K∞`.
    pub finitely_decomposed: bool,
}

impl PlaceDatum {
    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaceClass {
    P1,
    P2,
    Neither,
}

impl fmt::Display for PlaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaceClass::P1 => "P1",
            PlaceClass::P2 => "P2",
            PlaceClass::Neither => "neither",
        })
    }
}

/// `P1`: away from `p` with split multiplicative reduction.
/// `P2`: away from `p`, ramified, good reduction and a local `p`-torsion point.
pub fn classify_place(place: &PlaceDatum) -> PlaceClass {
    if place.over_p {
        PlaceClass::Neither
    } else if place.reduction == Reduction::SplitMultiplicative {
        PlaceClass::P1
    } else if place.is_ramified()
        && place.reduction == Reduction::Good
        && place.has_p_torsion_locally
    {
        PlaceClass::P2
    } else {
        PlaceClass::Neither
    }
}

/// Hypotheses the λ formula is stated under. None of them can be checked
/// here, so each is an explicit input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumptions {
    /// `Sel(E/K∞)` is cotorsion with `μ = 0`.
    pub mu_zero_cotorsion: bool,
    /// `E` has good ordinary reduction above `p`, and either no CM or no
    /// `p`-torsion over the base.
    pub good_ordinary_and_no_cm_or_no_p_torsion: bool,
    /// `L∞/K∞` is ramified only in a way compatible with the formula at `p`.
    pub p_ramified_in_tower: bool,
}

impl Assumptions {
    pub const ALL_HOLD: Assumptions = Assumptions {
        mu_zero_cotorsion: true,
        good_ordinary_and_no_cm_or_no_p_torsion: true,
        p_ramified_in_tower: true,
    };

    /// Name of the first flag that is false.
    pub fn first_violation(&self) -> Option<&'static str> {
        [
            ("mu_zero_cotorsion", self.mu_zero_cotorsion),
            (
                "good_ordinary_and_no_cm_or_no_p_torsion",
                self.good_ordinary_and_no_cm_or_no_p_torsion,
            ),
            ("p_ramified_in_tower", self.p_ramified_in_tower),
        ]
        .into_iter()
        .find(|(_, ok)| !ok)
        .map(|(name, _)| name)
    }
}

/// A `p`-extension `L∞/K∞` of degree `p^m` with `λ(E/K∞)` and the places of `L∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub p: u64,
    pub degree: u64,
    pub lambda_k: u64,
    pub assumptions: Assumptions,
    #[serde(default)]
    pub places: Vec<PlaceDatum>,
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

impl TowerSpec {
    /// Structural checks: `p` an odd prime, degree and every `e` powers of
    /// `p` with `e | degree`, and `ramified_over_base` consistent with `e`.
    pub fn validate(&self) -> Result<(), IwasawaError> {
        let bad = |msg: String| Err(IwasawaError::InvalidSpec(msg));
        if self.p < 3 || !is_prime_u64(self.p) {
            return bad(format!("p = {} is not an odd prime", self.p));
        }
        if !is_power_of(self.degree, self.p) {
            return bad(format!(
                "degree {} is not a power of {}",
                self.degree, self.p
            ));
        }
        for w in &self.places {
            if !is_power_of(w.e, self.p) || !self.degree.is_multiple_of(w.e) {
                return bad(format!(
                    "place {}: e = {} is not a power of {} dividing the degree {}",
                    w.label, w.e, self.p, self.degree
                ));
            }
            if w.ramified_over_base.is_some_and(|r| r != w.is_ramified()) {
                return bad(format!(
                    "place {}: ramified_over_base disagrees with e = {}",
                    w.label, w.e
                ));
            }
        }
        Ok(())
    }

    /// Validation plus the hypotheses of the formula; returns each place's class.
    pub fn checked_classes(&self) -> Result<Vec<PlaceClass>, IwasawaError> {
        self.validate()?;
        if let Some(flag) = self.assumptions.first_violation() {
            return Err(IwasawaError::AssumptionViolation(flag));
        }
        let classes: Vec<PlaceClass> = self.places.iter().map(classify_place).collect();
        for (w, c) in self.places.iter().zip(&classes) {
            if *c != PlaceClass::Neither && !w.finitely_decomposed {
                return Err(IwasawaError::DecompositionViolation(w.label.clone()));
            }
        }
        Ok(classes)
    }
}

/// `λ(E/L∞) = [L∞:K∞] λ(E/K∞) + Σ_{P1} (e - 1) + Σ_{P2} 2 (e - 1)`.
pub fn kida_lambda(tower: &TowerSpec) -> Result<u64, IwasawaError> {
    let classes = tower.checked_classes()?;
    let local: u64 = tower
        .places
        .iter()
        .zip(classes)
        .map(|(w, c)| match c {
            PlaceClass::P1 => w.e - 1,
            PlaceClass::P2 => 2 * (w.e - 1),
            PlaceClass::Neither => 0,
        })
        .sum();
    Ok(tower.degree * tower.lambda_k + local)
}

/// `ord_p` of the Herbrand quotient of `Sel(E/L∞)` for a cyclic step of
/// degree `p`: one per ramified `P1` place, two per `P2` place.
pub fn herbrand_ord(tower: &TowerSpec) -> Result<u64, IwasawaError> {
    if tower.degree != tower.p {
        return Err(IwasawaError::DegreeMismatch {
            degree: tower.degree,
            p: tower.p,
        });
    }
    let classes = tower.checked_classes()?;
    Ok(tower
        .places
        .iter()
        .zip(classes)
        .map(|(w, c)| match c {
            PlaceClass::P1 if w.is_ramified() => 1,
            PlaceClass::P2 => 2,
            _ => 0,
        })
        .sum())
}

/// `p λ(E/K∞) + (p - 1) ord_p h_G(Sel(E/L∞))` for a degree-`p` step.
pub fn lambda_via_herbrand(tower: &TowerSpec) -> Result<u64, IwasawaError> {
    let ord = herbrand_ord(tower)?;
    Ok(tower.p * tower.lambda_k + (tower.p - 1) * ord)
}
