//! Truncated q-series with exponents on the grid `(1/48) Z`.
//!
//! A series stores the exponent of its first coefficient (`off`) and an
//! exclusive absolute truncation bound (`prec`), both in units of `q^(1/48)`.
//! Products keep the usual relative precision, so nothing is ever read past
//! the truncation point.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Grid steps per unit exponent.
pub const GRID: i64 = 48;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    off: i64,
    prec: i64,
    coeffs: Vec<i128>,
}

/// Converts an exponent `num/den` to grid steps.
pub fn to_grid(num: i64, den: i64) -> Result<i64> {
    let (q, r) = (num * GRID).div_rem(&den);
    if r != 0 {
        return Err(Error::OffGrid(num, den));
    }
    Ok(q)
}

impl QSeries {
    /// Series with the given terms `(grid exponent, coefficient)`, truncated
    /// before grid exponent `prec`.
    pub fn from_terms(terms: &[(i64, i128)], prec: i64) -> Self {
        let off = terms.iter().map(|t| t.0).min().unwrap_or(prec).min(prec);
        let mut coeffs = vec![0i128; (prec - off).max(0) as usize];
        for &(e, c) in terms {
            if e < prec {
                coeffs[(e - off) as usize] += c;
            }
        }
        QSeries { off, prec, coeffs }.normalized()
    }

    pub fn zero(prec: i64) -> Self {
        QSeries { off: prec, prec, coeffs: Vec::new() }
    }

    pub fn one(prec: i64) -> Self {
        Self::from_terms(&[(0, 1)], prec)
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.off += lead as i64;
        self
    }

    /// Grid exponent of the lowest nonzero term (or `prec` for zero).
    pub fn valuation(&self) -> i64 {
        self.off
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Coefficient at grid exponent `e`, `None` beyond the truncation.
    pub fn coeff(&self, e: i64) -> Option<i128> {
        if e >= self.prec {
            return None;
        }
        if e < self.off {
            return Some(0);
        }
        Some(self.coeffs[(e - self.off) as usize])
    }

    /// Coefficient at the rational exponent `r`.
    pub fn coeff_at(&self, r: Ratio<i64>) -> Result<Option<i128>> {
        Ok(self.coeff(to_grid(*r.numer(), *r.denom())?))
    }

    /// Nonzero terms as `(grid exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(i64, i128)> {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (self.off + i as i64, c)).collect()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        let keep = (prec - self.off).max(0) as usize;
        QSeries { off: self.off.min(prec), prec, coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec() }.normalized()
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec.min(other.prec);
        let mut terms = self.terms();
        terms.extend(other.terms());
        Self::from_terms(&terms, prec)
    }

    pub fn neg(&self) -> QSeries {
        QSeries { off: self.off, prec: self.prec, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> QSeries {
        QSeries { off: self.off, prec: self.prec, coeffs: self.coeffs.iter().map(|c| c * k).collect() }.normalized()
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_int(&self, k: i128) -> Result<QSeries> {
        if self.coeffs.iter().any(|c| c % k != 0) {
            return Err(Error::Precondition(format!("series coefficients are not divisible by {k}")));
        }
        Ok(QSeries { off: self.off, prec: self.prec, coeffs: self.coeffs.iter().map(|c| c / k).collect() })
    }

    /// Multiplies by `q^(e/48)`.
    pub fn shift(&self, e: i64) -> QSeries {
        QSeries { off: self.off + e, prec: self.prec + e, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = (self.prec + other.off).min(other.prec + self.off);
        let off = self.off + other.off;
        let len = (prec - off).max(0) as usize;
        let mut coeffs = vec![0i128; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        QSeries { off, prec, coeffs }.normalized()
    }

    pub fn pow(&self, k: u32) -> QSeries {
        let mut acc: Option<QSeries> = None;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| QSeries::one(self.prec - self.off))
    }

    /// Exact quotient; the divisor's leading coefficient must be `1` or `-1`.
    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        let lead = other.coeffs.first().copied().unwrap_or(0);
        if lead != 1 && lead != -1 {
            return Err(Error::NonUnitDivisor);
        }
        let prec = (self.prec - other.off).min(other.prec + self.off - 2 * other.off);
        let off = self.off - other.off;
        let len = (prec - off).max(0) as usize;
        let mut q = vec![0i128; len];
        let mut rem: Vec<i128> = self.coeffs.iter().copied().take(len).collect();
        rem.resize(len, 0);
        for i in 0..len {
            let c = rem[i] * lead;
            q[i] = c;
            if c != 0 {
                for (j, &b) in other.coeffs.iter().enumerate().skip(1) {
                    if i + j >= len {
                        break;
                    }
                    rem[i + j] -= c * b;
                }
            }
        }
        Ok(QSeries { off, prec, coeffs: q }.normalized())
    }

    /// Substitutes `q -> q^(num/den)` for `num/den` in `{1/2, 2}` or any
    /// positive integer.
    pub fn substitute(&self, num: i64, den: i64) -> Result<QSeries> {
        let map = |e: i64| -> Result<i64> {
            let (q, r) = (e * num).div_rem(&den);
            if r != 0 {
                return Err(Error::OffGrid(e * num, den * GRID));
            }
            Ok(q)
        };
        let terms: Vec<(i64, i128)> = self.terms().into_iter().map(|(e, c)| Ok((map(e)?, c))).collect::<Result<_>>()?;
        // the truncation bound may land between grid points
        let prec = Integer::div_ceil(&(self.prec * num), &den);
        Ok(Self::from_terms(&terms, prec))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// The common truncation of two series agrees.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let p = self.prec.min(other.prec);
        self.truncate(p) == other.truncate(p)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            writeln!(f, "q^{{{e}/48}}: {c}")?;
        }
        writeln!(f, "O(q^{{{}/48}})", self.prec)
    }
}

/// Grid bound that keeps every term up to and including `q^n`.
pub fn through(n: i64) -> i64 {
    GRID * n + 1
}

/// `eta(q^m) = q^(m/24) prod (1 - q^(m i))` for `m` in `{1/2, 1, 2}`,
/// given as `m_num / m_den`, with terms through `q^n` before the prefactor.
pub fn eta(m_num: i64, m_den: i64, n: i64) -> Result<QSeries> {
    if !matches!((m_num, m_den), (1, 2) | (1, 1) | (2, 1)) {
        return Err(Error::Unsupported(format!("eta scale {m_num}/{m_den}")));
    }
    let step = to_grid(m_num, m_den)?;
    let prec = through(n);
    let mut p = QSeries::one(prec);
    let mut i = 1;
    while i * step < prec {
        p = p.mul(&QSeries::from_terms(&[(0, 1), (i * step, -1)], prec));
        i += 1;
    }
    Ok(p.shift(step / 24))
}

/// Jacobi theta series `theta_2`, `theta_3`, `theta_4` through `q^n`.
pub fn theta(k: u8, n: i64) -> Result<QSeries> {
    let prec = through(n);
    let mut terms = Vec::new();
    let mut i: i64 = 0;
    loop {
        // exponent i^2 (k = 3, 4) or (i + 1/2)^2 = (2i+1)^2 / 4 (k = 2)
        let e = match k {
            2 => 12 * (2 * i + 1) * (2 * i + 1),
            3 | 4 => GRID * i * i,
            _ => return Err(Error::Unsupported(format!("theta_{k}"))),
        };
        if e >= prec {
            break;
        }
        let sign = if k == 4 && i % 2 == 1 { -1 } else { 1 };
        let mult = if k == 2 || i > 0 { 2 } else { 1 };
        terms.push((e, sign * mult));
        i += 1;
    }
    Ok(QSeries::from_terms(&terms, prec))
}

/// `Theta / eta^n`, the character of `V_L` (or of `V_{lambda+L}`).
pub fn ch_lattice(theta_series: &QSeries, rank: u32) -> Result<QSeries> {
    let n = precision_hint(theta_series);
    theta_series.div(&eta(1, 1, n)?.pow(rank))
}

fn precision_hint(s: &QSeries) -> i64 {
    Integer::div_ceil(&s.precision(), &GRID).max(1) + 1
}

/// `eta(q)^n / eta(q^2)^n`, the graded trace of the lift of `-1` on `V_L`.
pub fn eta_ratio(rank: u32, n: i64) -> Result<QSeries> {
    eta(1, 1, n)?.pow(rank).div(&eta(2, 1, n)?.pow(rank))
}

pub fn ch_vl(theta_series: &QSeries, rank: u32) -> Result<QSeries> {
    ch_lattice(theta_series, rank)
}

/// `(Theta/eta^n + sign * eta(q)^n/eta(q^2)^n) / 2`.
pub fn ch_vl_sign(theta_series: &QSeries, rank: u32, plus: bool) -> Result<QSeries> {
    let a = ch_lattice(theta_series, rank)?;
    let b = eta_ratio(rank, precision_hint(theta_series))?;
    let s = if plus { a.add(&b) } else { a.sub(&b) };
    s.div_int(2)
}

pub fn ch_vl_plus(theta_series: &QSeries, rank: u32) -> Result<QSeries> {
    ch_vl_sign(theta_series, rank, true)
}

pub fn ch_vl_minus(theta_series: &QSeries, rank: u32) -> Result<QSeries> {
    ch_vl_sign(theta_series, rank, false)
}

/// Character shared by `V_{lambda+L}^+` and `V_{lambda+L}^-` for `lambda`
/// outside `L`: half of `Theta_{lambda+L} / eta^n`.
pub fn ch_untwisted_pm(coset_theta: &QSeries, rank: u32) -> Result<QSeries> {
    ch_lattice(coset_theta, rank)?.div_int(2)
}

/// `(dimT/2) (eta(q)^n/eta(q^(1/2))^n +- eta(q^2)^n eta(q^(1/2))^n / eta(q)^(2n))`.
pub fn ch_twisted_pm(rank: u32, dim_t: u64, plus: bool, n: i64) -> Result<QSeries> {
    if dim_t == 0 {
        return Err(Error::Precondition("dim T must be positive".into()));
    }
    let e1 = eta(1, 1, n + 1)?.pow(rank);
    let eh = eta(1, 2, n + 1)?.pow(rank);
    let e2 = eta(2, 1, n + 1)?.pow(rank);
    let a = e1.div(&eh)?;
    let b = e2.mul(&eh).div(&e1.mul(&e1))?;
    let s = if plus { a.add(&b) } else { a.sub(&b) };
    s.scale(dim_t as i128).div_int(2).map(|s| s.truncate(through(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagonal_numbers() {
        let e = eta(1, 1, 8).unwrap();
        // q^(1/24) (1 - q - q^2 + q^5 + q^7 - ...)
        let got: Vec<(i64, i128)> = e.terms().into_iter().map(|(x, c)| ((x - 2) / 48, c)).collect();
        assert_eq!(got, vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1)]);
    }

    #[test]
    fn jacobi_identity() {
        let n = 12;
        let t2 = theta(2, n).unwrap().pow(4);
        let t3 = theta(3, n).unwrap().pow(4);
        let t4 = theta(4, n).unwrap().pow(4);
        let z = t3.sub(&t4).sub(&t2);
        assert!(z.terms().is_empty());
        assert!(z.precision() >= through(n));
    }

    #[test]
    fn geometric_series_inverse() {
        let n = 10;
        let one_minus_q = QSeries::from_terms(&[(0, 1), (48, -1)], through(n));
        let geo = QSeries::from_terms(&(0..=n).map(|i| (48 * i, 1)).collect::<Vec<_>>(), through(n));
        assert!(one_minus_q.mul(&geo).agrees_with(&QSeries::one(through(n))));
        assert!(QSeries::one(through(n)).div(&one_minus_q).unwrap().agrees_with(&geo));
    }

    #[test]
    fn substitution_consistency() {
        let half = eta(1, 2, 10).unwrap();
        let full = eta(1, 1, 5).unwrap();
        assert!(half.substitute(2, 1).unwrap().agrees_with(&full));
        assert_ne!(half.mul(&half).truncate(through(4)), full.truncate(through(4)));
        let twice = eta(2, 1, 10).unwrap();
        assert!(twice.terms().iter().all(|&(e, _)| (e - 4) % 96 == 0));
    }

    #[test]
    fn eta_ratio_is_integral() {
        for n in [1, 8, 16] {
            let r = eta_ratio(n, 10).unwrap();
            assert_eq!(r.valuation(), -2 * n as i64);
        }
    }

    #[test]
    fn twisted_lowest_weights() {
        // weight = exponent + n/24
        let plus = ch_twisted_pm(16, 1, true, 6).unwrap();
        let minus = ch_twisted_pm(16, 1, false, 6).unwrap();
        assert_eq!(plus.valuation() + 32, 48);
        assert_eq!(minus.valuation() + 32, 72);
        let sum = plus.add(&minus);
        let e1 = eta(1, 1, 7).unwrap().pow(16);
        let eh = eta(1, 2, 7).unwrap().pow(16);
        assert!(sum.agrees_with(&e1.div(&eh).unwrap()));
    }
}
