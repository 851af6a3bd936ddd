use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, Poly, Rational};

/// A reduced element of ℚ(t): `gcd(num, den) = 1` and `den` is monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }
}

/// Divides out `gcd(num, den)` and makes the denominator monic.
pub fn reduce(num: &Poly, den: &Poly) -> Result<RationalFunction, AlgebraError> {
    if den.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        });
    }
    let g = num.gcd(den);
    let num = num.div_exact(&g);
    let den = den.div_exact(&g);
    let lead = den.leading().expect("non-zero denominator").recip();
    Ok(RationalFunction {
        num: num.scale(&lead),
        den: den.scale(&lead),
    })
}

/// Value at `t = -1`, or `None` when the reduced denominator vanishes there.
pub fn eval_at_minus_one(f: &RationalFunction) -> Option<Rational> {
    let m1 = -Rational::one();
    let d = f.den.eval(&m1);
    if d.is_zero() {
        return None;
    }
    Some(f.num.eval(&m1) / d)
}

/// The first `k + 1` power-series coefficients, by exact long division.
pub fn taylor_coefficients(f: &RationalFunction, k: usize) -> Result<Vec<Rational>, AlgebraError> {
    series_coefficients(&f.num, &f.den, k)
}

/// Power-series coefficients of an unreduced quotient `num / den`.
pub fn series_coefficients(
    num: &Poly,
    den: &Poly,
    k: usize,
) -> Result<Vec<Rational>, AlgebraError> {
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(AlgebraError::DenominatorVanishesAtZero);
    }
    let inv = d0.recip();
    let mut out: Vec<Rational> = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut c = num.coeff(n);
        for i in 1..=n.min(den.coeffs().len().saturating_sub(1)) {
            c -= den.coeff(i) * &out[n - i];
        }
        out.push(c * &inv);
    }
    Ok(out)
}

/// The shortest linear recurrence of `s` (Berlekamp–Massey over ℚ), as
/// `(C, L)` with `C(0) = 1`, `deg C ≤ L` and
/// `Σ_{i=0}^{L} C_i s_{n−i} = 0` for `L ≤ n < s.len()`.
pub fn berlekamp_massey(s: &[Rational]) -> (Poly, usize) {
    let mut c = Poly::one();
    let mut b = Poly::one();
    let mut l = 0;
    let mut m = 1;
    let mut last = Rational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l {
            d += c.coeff(i) * &s[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let step = &c - &(&Poly::monomial(&d / &last, m) * &b);
        if 2 * l <= n {
            b = std::mem::replace(&mut c, step);
            l = n + 1 - l;
            last = d;
            m = 1;
        } else {
            c = step;
            m += 1;
        }
    }
    (c, l)
}

/// The reduced rational function whose power series starts with `s`,
/// assuming its recurrence has order at most `s.len() / 2`.
pub fn rational_from_sequence(s: &[Rational]) -> RationalFunction {
    let (c, l) = berlekamp_massey(s);
    debug_assert!(2 * l <= s.len(), "too few terms to pin down the recurrence");
    let head = Poly::new(s[..l.min(s.len())].to_vec());
    let full = &head * &c;
    let num = Poly::new((0..l).map(|k| full.coeff(k)).collect());
    reduce(&num, &c).expect("C(0) = 1")
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let f = reduce(&Poly::from_ints(&[2, 2]), &Poly::from_ints(&[1, 0, -1])).unwrap();
        assert_eq!(
            f,
            reduce(&Poly::from_ints(&[2]), &Poly::from_ints(&[1, -1])).unwrap()
        );
        assert_eq!(f.den(), &Poly::from_ints(&[-1, 1]));
        assert_eq!(f.num(), &Poly::from_ints(&[-2]));
    }

    #[test]
    fn reduce_coprime_and_zero() {
        let f = reduce(&Poly::one(), &Poly::from_ints(&[1, -1])).unwrap();
        assert_eq!(eval_at_minus_one(&f), Some(q(1, 2)));
        let z = reduce(&Poly::zero(), &Poly::from_ints(&[1, -1])).unwrap();
        assert_eq!(z.num(), &Poly::zero());
        assert_eq!(z.den(), &Poly::one());
        assert!(matches!(
            reduce(&Poly::one(), &Poly::zero()),
            Err(AlgebraError::ZeroDenominator)
        ));
    }

    #[test]
    fn eval_examples() {
        let f = reduce(&Poly::from_ints(&[2, 1]), &Poly::one()).unwrap();
        assert_eq!(eval_at_minus_one(&f), Some(q(1, 1)));
        let pole = reduce(&Poly::one(), &Poly::from_ints(&[1, 1])).unwrap();
        assert_eq!(eval_at_minus_one(&pole), None);
    }

    #[test]
    fn recurrences() {
        let (c, l) = berlekamp_massey(&ints(&[1, 1, 1, 1]));
        assert_eq!((c, l), (Poly::from_ints(&[1, -1]), 1));
        let fib = ints(&[1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(berlekamp_massey(&fib), (Poly::from_ints(&[1, -1, -1]), 2));
        let f = rational_from_sequence(&fib);
        assert_eq!(
            f,
            reduce(&Poly::one(), &Poly::from_ints(&[1, -1, -1])).unwrap()
        );
        // a finite sequence gives back its polynomial
        let p = rational_from_sequence(&ints(&[3, 3, 1, 0, 0, 0, 0, 0]));
        assert_eq!(p, RationalFunction::from_poly(Poly::from_ints(&[3, 3, 1])));
        assert_eq!(
            rational_from_sequence(&[]),
            RationalFunction::from_poly(Poly::zero())
        );
        // transient then geometric: 2 + t/(1 − 2t)
        let s = ints(&[2, 1, 2, 4, 8, 16]);
        let g = rational_from_sequence(&s);
        assert_eq!(taylor_coefficients(&g, 5).unwrap(), s);
    }

    #[test]
    fn taylor_examples() {
        let geo = reduce(&Poly::one(), &Poly::from_ints(&[1, -1])).unwrap();
        assert_eq!(taylor_coefficients(&geo, 3).unwrap(), ints(&[1, 1, 1, 1]));
        let p = reduce(&Poly::from_ints(&[2, 1]), &Poly::one()).unwrap();
        assert_eq!(taylor_coefficients(&p, 3).unwrap(), ints(&[2, 1, 0, 0]));
        let iso = reduce(&Poly::from_ints(&[2, 2]), &Poly::from_ints(&[1, 0, -1])).unwrap();
        assert_eq!(taylor_coefficients(&iso, 3).unwrap(), ints(&[2, 2, 2, 2]));
        let bad = reduce(&Poly::one(), &Poly::t()).unwrap();
        assert!(matches!(
            taylor_coefficients(&bad, 2),
            Err(AlgebraError::DenominatorVanishesAtZero)
        ));
    }
}
