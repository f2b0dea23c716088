//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Monomials are dense exponent vectors over a fixed variable count, kept
//! in a `BTreeMap` so iteration order (and therefore printing) is
//! deterministic. The canonical text form lists terms by descending
//! lexicographic exponent order: `4*x1*x2`, `x1 + x2`, `0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Polynomial in `nvars` variables with rational coefficients.
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable with 0-based index `i` (printed as `x{i+1}`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut exp = vec![0u32; nvars];
        exp[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(exp, BigRational::one());
        p
    }

    /// Monomial `c * x^exp`.
    pub fn monomial(nvars: usize, exp: Vec<u32>, c: BigRational) -> Self {
        assert_eq!(exp.len(), nvars, "exponent vector length mismatch");
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Adds `c * x^exp` in place. The workhorse for building large sums
    /// term by term without rebuilding the whole map each time.
    pub fn add_term(&mut self, exp: Vec<u32>, c: BigRational) {
        use std::collections::btree_map::Entry;
        assert_eq!(exp.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x <= 1))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn check_vars(&self, rhs: &MPoly) -> Result<()> {
        if self.nvars != rhs.nvars {
            return Err(Error::VariableMismatch(self.nvars, rhs.nvars));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &MPoly) -> Result<MPoly> {
        self.check_vars(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &MPoly) -> Result<MPoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &MPoly) -> Result<MPoly> {
        self.check_vars(rhs)?;
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MPoly { nvars: self.nvars, terms })
    }

    pub fn scalar_mul(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars {
            return Err(Error::VariableMismatch(self.nvars, point.len()));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitutes each variable `i` by the sum of the (0-based) new
    /// variables in `assign[i]`, producing a polynomial in `new_nvars`
    /// variables.
    pub fn substitute_sum(&self, new_nvars: usize, assign: &[Vec<usize>]) -> Result<MPoly> {
        if assign.len() != self.nvars {
            return Err(Error::VariableMismatch(self.nvars, assign.len()));
        }
        for group in assign {
            for &v in group {
                if v >= new_nvars {
                    return Err(Error::IndexOutOfRange(format!(
                        "substitution target {v} of {new_nvars}"
                    )));
                }
            }
        }
        let images: Vec<MPoly> = assign
            .iter()
            .map(|group| {
                let mut s = MPoly::zero(new_nvars);
                for &v in group {
                    s = s.add(&MPoly::var(new_nvars, v)).expect("same ring");
                }
                s
            })
            .collect();
        let mut out = MPoly::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(new_nvars, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&images[i].pow(exp)).expect("same ring");
                }
            }
            out = out.add(&term).expect("same ring");
        }
        Ok(out)
    }

    /// Replaces each multilinear monomial `x^S` by `x^(complement of S)`.
    /// Errors on non-multilinear input; involutive on multilinear input.
    pub fn reciprocal_transform(&self) -> Result<MPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if let Some((variable, &exponent)) =
                e.iter().enumerate().find(|(_, &x)| x > 1)
            {
                return Err(Error::NotMultilinear { variable, exponent });
            }
            let flipped: Vec<u32> = e.iter().map(|&x| 1 - x).collect();
            terms.insert(flipped, c.clone());
        }
        Ok(MPoly { nvars: self.nvars, terms })
    }

    /// Canonical human-readable form: terms in descending lexicographic
    /// exponent order, reduced fractions, `*` between factors, `^` powers.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(abs.to_string());
            }
            for (i, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, exp)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the canonical form back. Accepts any whitespace around `+`/`-`.
    pub fn parse(nvars: usize, s: &str) -> Result<MPoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = MPoly::zero(nvars);
        // Split into signed terms.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut sign = false; // negative?
        let mut chars = s.chars().peekable();
        // Leading sign.
        if let Some(&c) = chars.peek() {
            if c == '-' {
                sign = true;
                chars.next();
            } else if c == '+' {
                chars.next();
            }
        }
        for c in chars {
            if c == '+' || c == '-' {
                if current.trim().is_empty() {
                    return Err(Error::Parse("dangling sign".into()));
                }
                terms.push((sign, current.trim().to_string()));
                current = String::new();
                sign = c == '-';
            } else {
                current.push(c);
            }
        }
        if current.trim().is_empty() {
            return Err(Error::Parse("dangling sign".into()));
        }
        terms.push((sign, current.trim().to_string()));

        for (negative, term) in terms {
            let mut coeff = BigRational::one();
            let mut exp = vec![0u32; nvars];
            let mut saw_factor = false;
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in term {term:?}")));
                }
                saw_factor = true;
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var_s, pow_s) = match rest.split_once('^') {
                        Some((v, p)) => (v, Some(p)),
                        None => (rest, None),
                    };
                    let var: usize = var_s
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad variable {factor:?}: {e}")))?;
                    if var == 0 || var > nvars {
                        return Err(Error::Parse(format!(
                            "variable x{var} out of range 1..={nvars}"
                        )));
                    }
                    let power: u32 = match pow_s {
                        Some(p) => p
                            .parse()
                            .map_err(|e| Error::Parse(format!("bad power {factor:?}: {e}")))?,
                        None => 1,
                    };
                    exp[var - 1] += power;
                } else {
                    let c: BigRational = parse_rational(factor)?;
                    coeff *= c;
                }
            }
            if !saw_factor {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            if negative {
                coeff = -coeff;
            }
            out = out.add(&MPoly::monomial(nvars, exp, coeff))?;
        }
        Ok(out)
    }

    /// Machine-readable term list: one line per term,
    /// `numerator/denominator e_1 ... e_n`, in descending exponent order.
    pub fn to_term_lines(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let exps: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{}/{} {}\n", c.numer(), c.denom(), exps.join(" ")));
        }
        out
    }
}

impl std::fmt::Debug for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MPoly[{}]({})", self.nvars, self.to_canonical_string())
    }
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

/// Parses `a` or `a/b` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt =
                n.trim().parse().map_err(|e| Error::Parse(format!("bad numerator {n:?}: {e}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad denominator {d:?}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt =
                s.parse().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn canonical_string_matches_expected_forms() {
        let n = 2;
        let x1 = MPoly::var(n, 0);
        let x2 = MPoly::var(n, 1);
        assert_eq!(x2.add(&x1).unwrap().to_canonical_string(), "x1 + x2");
        let p = x1.mul(&x2).unwrap().scalar_mul(&rat(4));
        assert_eq!(p.to_canonical_string(), "4*x1*x2");
        assert_eq!(MPoly::zero(n).to_canonical_string(), "0");
        assert_eq!(MPoly::constant(n, rat(-3)).to_canonical_string(), "-3");
        let q = x1.pow(2).sub(&x2.scalar_mul(&BigRational::new(
            BigInt::from(1),
            BigInt::from(2),
        ))).unwrap();
        assert_eq!(q.to_canonical_string(), "x1^2 - 1/2*x2");
    }

    #[test]
    fn parse_round_trips_canonical_strings() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let nvars = rng.gen_range(1..5);
            let mut p = MPoly::zero(nvars);
            for _ in 0..rng.gen_range(0..6) {
                let exp: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..4)).collect();
                let c = BigRational::new(
                    BigInt::from(rng.gen_range(-9i64..=9)),
                    BigInt::from(rng.gen_range(1i64..=9)),
                );
                p = p.add(&MPoly::monomial(nvars, exp, c)).unwrap();
            }
            let s = p.to_canonical_string();
            let q = MPoly::parse(nvars, &s).unwrap();
            assert_eq!(p, q, "round trip failed for {s}");
        }
    }

    #[test]
    fn reciprocal_transform_flips_multilinear_supports() {
        let n = 3;
        // x1*x2 + x2*x3 -> x3 + x1
        let p = MPoly::parse(n, "x1*x2 + x2*x3").unwrap();
        let r = p.reciprocal_transform().unwrap();
        assert_eq!(r.to_canonical_string(), "x1 + x3");
        // Constant 1 in two variables -> x1*x2.
        let one = MPoly::one(2);
        assert_eq!(one.reciprocal_transform().unwrap().to_canonical_string(), "x1*x2");
        // Involution on homogeneous multilinear input.
        assert_eq!(r.reciprocal_transform().unwrap(), p);
        // Non-multilinear input errors.
        assert!(MPoly::parse(n, "x1^2").unwrap().reciprocal_transform().is_err());
    }

    #[test]
    fn substitute_sum_expands_variables() {
        // p = x1*x2, substitute x1 -> z1+z2, x2 -> z3: z1*z3 + z2*z3.
        let p = MPoly::parse(2, "x1*x2").unwrap();
        let q = p.substitute_sum(3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(q.to_canonical_string(), "x1*x3 + x2*x3");
        // Non-multilinear substitution keeps exact arithmetic: (z1+z2)^2.
        let sq = MPoly::parse(1, "x1^2").unwrap();
        let r = sq.substitute_sum(2, &[vec![0, 1]]).unwrap();
        assert_eq!(r.to_canonical_string(), "x1^2 + 2*x1*x2 + x2^2");
    }

    #[test]
    fn evaluate_uses_exact_rationals() {
        let p = MPoly::parse(2, "1/2*x1^2 + x2").unwrap();
        let v = p.evaluate(&[rat(3), BigRational::new(BigInt::from(1), BigInt::from(3))]).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(29), BigInt::from(6)));
        // Evaluation at the all-zero point returns the constant term.
        let c = p.evaluate(&[rat(0), rat(0)]).unwrap();
        assert_eq!(c, BigRational::zero());
    }

    #[test]
    fn term_lines_are_descending_and_reduced() {
        let p = MPoly::parse(2, "2/4*x1 + x2").unwrap();
        assert_eq!(p.to_term_lines(), "1/2 1 0\n1/1 0 1\n");
    }
}
