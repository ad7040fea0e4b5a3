//! The level-5 modular polynomial, shipped as a text table.
//!
//! Format: one monomial per line, `<xdeg> <ydeg> <coefficient>` separated by
//! single spaces, coefficient in decimal with an optional leading `-`.
//! Lines that are empty or start with `#` are ignored. Only monomials with
//! `xdeg >= ydeg` appear; each off-diagonal entry stands for itself and its
//! mirror image when the symmetric polynomial is wanted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::FamilyError;

/// The checked-in table.
pub const PHI5_TABLE: &str = include_str!("../../data/phi5.txt");

/// j-invariant of `y^2 = x^3 - x`.
pub const J_1728: i64 = 1728;

/// Which polynomial in X to build from the table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Phi5Form {
    /// Sum over the listed monomials only. This is the sextic whose
    /// factorizations mod 63241 and 63901 are the published ones, and the
    /// one that reproduces the published prime list.
    #[default]
    AsTabulated,
    /// The symmetric Φ5(X, Y), every off-diagonal monomial mirrored.
    Symmetrized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi5Table {
    /// `(xdeg, ydeg) -> coefficient`, `xdeg >= ydeg`.
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Phi5Table {
    pub fn parse(text: &str) -> Result<Self, FamilyError> {
        let mut terms = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |why: &str| FamilyError::Phi5Table {
                line: idx + 1,
                reason: why.to_string(),
            };
            let fields: Vec<&str> = line.split(' ').collect();
            let [xd, yd, c] = fields[..] else {
                return Err(bad("expected exactly three space-separated fields"));
            };
            let xd: u32 = xd.parse().map_err(|_| bad("bad x degree"))?;
            let yd: u32 = yd.parse().map_err(|_| bad("bad y degree"))?;
            let coeff = BigInt::from_str(c).map_err(|_| bad("bad coefficient"))?;
            if xd < yd {
                return Err(bad("monomials must have xdeg >= ydeg"));
            }
            if xd > 6 || yd > 6 {
                return Err(bad("degree above 6"));
            }
            if coeff.is_zero() {
                return Err(bad("zero coefficient"));
            }
            if terms.insert((xd, yd), coeff).is_some() {
                return Err(bad("duplicate monomial"));
            }
        }
        let table = Self { terms };
        table.self_check()?;
        Ok(table)
    }

    /// Structural and arithmetic sanity checks on the table:
    /// monic of degree 6 in X, the symmetrization really is symmetric,
    /// Kronecker's congruence `Φ5 ≡ (X^5 - Y)(X - Y^5) (mod 5)` holds, and
    /// `Φ5(1728, 1728) = 0` (j = 1728 has an endomorphism of degree 5).
    pub fn self_check(&self) -> Result<(), FamilyError> {
        let fail = |what: &str| Err(FamilyError::Phi5SelfCheck(what.to_string()));
        if self.terms.get(&(6, 0)) != Some(&BigInt::one())
            || self.terms.keys().any(|&(x, y)| x == 6 && y != 0)
        {
            return fail("not monic of degree 6 in X");
        }
        let full = self.symmetrized_terms();
        if full.iter().any(|(&(x, y), c)| full.get(&(y, x)) != Some(c)) {
            return fail("symmetrized table is not symmetric");
        }
        let mut kronecker: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (k, c) in [((6, 0), 1), ((0, 6), 1), ((5, 5), -1), ((1, 1), -1)] {
            kronecker.insert(k, BigInt::from(c));
        }
        let five = BigInt::from(5);
        for x in 0..=6 {
            for y in 0..=6 {
                let lhs = full.get(&(x, y)).cloned().unwrap_or_default();
                let rhs = kronecker.get(&(x, y)).cloned().unwrap_or_default();
                if !(lhs - rhs).is_multiple_of(&five) {
                    return fail("Kronecker congruence mod 5 fails");
                }
            }
        }
        let j = BigInt::from(J_1728);
        let at_j: BigInt = full
            .iter()
            .map(|(&(x, y), c)| c * j.pow(x) * j.pow(y))
            .sum();
        if !at_j.is_zero() {
            return fail("Phi5(1728, 1728) != 0");
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn symmetrized_terms(&self) -> BTreeMap<(u32, u32), BigInt> {
        let mut full = BTreeMap::new();
        for (&(x, y), c) in &self.terms {
            full.insert((x, y), c.clone());
            full.insert((y, x), c.clone());
        }
        full
    }

    /// Prints the table back in its file format (without comments).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&(x, y), c) in &self.terms {
            writeln!(out, "{x} {y} {c}").expect("writing to a String");
        }
        out
    }

    /// Coefficients in X (index = degree) of the table specialised at `Y = y`.
    pub fn at_y(&self, y: &BigInt, form: Phi5Form) -> Vec<BigInt> {
        let terms = match form {
            Phi5Form::AsTabulated => self.terms.clone(),
            Phi5Form::Symmetrized => self.symmetrized_terms(),
        };
        let mut out = vec![BigInt::zero(); 7];
        for ((x, yd), c) in terms {
            out[x as usize] += c * y.pow(yd);
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }
}

/// The embedded table, parsed and checked once.
pub fn phi5_table() -> &'static Phi5Table {
    static TABLE: OnceLock<Phi5Table> = OnceLock::new();
    TABLE.get_or_init(|| Phi5Table::parse(PHI5_TABLE).expect("embedded Phi5 table is valid"))
}

/// `Φ5(X, 1728)` in the requested form, cached.
pub fn phi5_at_1728_form(form: Phi5Form) -> &'static [BigInt] {
    static TAB: OnceLock<Vec<BigInt>> = OnceLock::new();
    static SYM: OnceLock<Vec<BigInt>> = OnceLock::new();
    let cell = match form {
        Phi5Form::AsTabulated => &TAB,
        Phi5Form::Symmetrized => &SYM,
    };
    cell.get_or_init(|| phi5_table().at_y(&BigInt::from(J_1728), form))
}

/// `Φ5(X, 1728)` as used by the prime filter.
pub fn phi5_at_1728() -> &'static [BigInt] {
    phi5_at_1728_form(Phi5Form::AsTabulated)
}
