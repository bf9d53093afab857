//! Closed-form capacities, upper bounds and comparison rates.
//!
//! Every formula is generic over the scalar it is evaluated in. Use
//! [`Rate`](crate::Rate) for exact answers; `f64` is handy for plotting.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::network::{classify_closed_form, Classification, NetworkParams2x2};

/// Scalar type the rate formulas can be evaluated in.
pub trait RateScalar: Num + FromPrimitive + Clone + PartialOrd + Debug {}

impl<T: Num + FromPrimitive + Clone + PartialOrd + Debug> RateScalar for T {}

fn lit<T: RateScalar>(v: u64) -> T {
    T::from_u64(v).expect("level counts fit every rate scalar")
}

fn frac<T: RateScalar>(num: u64, den: u64) -> T {
    lit::<T>(num) / lit::<T>(den)
}

fn min<T: RateScalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub fn upper_cutset<T: RateScalar>(p: &NetworkParams2x2) -> T {
    lit(u64::from(p.min_link()))
}

/// `(max(n11, n21) + max(n22, n12)) / 3`, defined for non-degenerate networks
/// only.
pub fn upper_nondegenerate<T: RateScalar>(p: &NetworkParams2x2) -> Option<T> {
    match classify_closed_form(p) {
        Classification::Degenerate => None,
        Classification::NonDegenerate => {
            let sum = p.n11.max(p.n21) + p.n22.max(p.n12);
            Some(frac(u64::from(sum), 3))
        }
    }
}

pub fn capacity_degenerate<T: RateScalar>(p: &NetworkParams2x2) -> Result<T> {
    match classify_closed_form(p) {
        Classification::Degenerate => Ok(upper_cutset(p)),
        Classification::NonDegenerate => Err(Error::Precondition(format!(
            "network ({},{},{},{}) is not degenerate",
            p.n11, p.n12, p.n21, p.n22
        ))),
    }
}

/// Two-user symmetric capacity: `n` when `m = n`, otherwise
/// `min(m, n, 2 max(m, n) / 3)`.
pub fn capacity_symmetric<T: RateScalar>(m: u32, n: u32) -> T {
    let (lo, hi) = (m.min(n), m.max(n));
    if lo == hi {
        return lit(u64::from(n));
    }
    min(lit(u64::from(lo)), frac(2 * u64::from(hi), 3))
}

/// Computing capacity of a two-user network where it is known (degenerate
/// or symmetric networks); `None` otherwise.
pub fn capacity_2x2<T: RateScalar>(p: &NetworkParams2x2) -> Option<T> {
    if let Ok(c) = capacity_degenerate(p) {
        return Some(c);
    }
    p.as_symmetric().map(|s| capacity_symmetric(s.m(), s.n()))
}

/// `C / q` as a function of `alpha = min(m, n) / q`.
pub fn normalized_capacity<T: RateScalar>(m: u32, n: u32) -> Result<T> {
    let q = m.max(n);
    if q == 0 {
        return Err(Error::Precondition("normalized capacity needs q > 0".into()));
    }
    let lo = m.min(n);
    if lo == q {
        return Ok(T::one());
    }
    Ok(min(frac(u64::from(lo), u64::from(q)), frac(2, 3)))
}

/// Rate of decoding both sources everywhere and summing: `q min(alpha, 1/2)`.
pub fn separation_rate<T: RateScalar>(m: u32, n: u32) -> T {
    let (lo, hi) = (m.min(n), m.max(n));
    min(lit(u64::from(lo)), frac(u64::from(hi), 2))
}

fn require_multiuser(users: usize) -> Result<()> {
    if users < 3 {
        return Err(Error::Precondition(format!(
            "L-user formulas need L >= 3, got {users}; use the two-user formulas"
        )));
    }
    Ok(())
}

/// Linear computing capacity with `L >= 3` users.
pub fn luser_linear_capacity<T: RateScalar>(m: u32, n: u32, users: usize) -> Result<T> {
    require_multiuser(users)?;
    let (lo, hi) = (m.min(n), m.max(n));
    if lo == hi {
        return Ok(lit(u64::from(n)));
    }
    Ok(min(lit(u64::from(lo)), frac(u64::from(hi), 2)))
}

/// Upper bound on the (not necessarily linear) computing capacity with
/// `L >= 3` users: `min(m, n, L max(m, n) / (2L - 1))`.
pub fn luser_upper_bound<T: RateScalar>(m: u32, n: u32, users: usize) -> Result<T> {
    require_multiuser(users)?;
    let (lo, hi) = (m.min(n), m.max(n));
    if lo == hi {
        return Ok(lit(u64::from(n)));
    }
    let l = users as u64;
    Ok(min(lit(u64::from(lo)), frac(l * u64::from(hi), 2 * l - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rate;

    fn r(n: i64, d: i64) -> Rate {
        Rate::new(n, d)
    }

    #[test]
    fn cutset_examples() {
        assert_eq!(upper_cutset::<Rate>(&NetworkParams2x2::symmetric(3, 5)), r(3, 1));
        assert_eq!(upper_cutset::<Rate>(&NetworkParams2x2::new(0, 4, 4, 0)), r(0, 1));
        assert_eq!(upper_cutset::<Rate>(&NetworkParams2x2::new(4, 2, 5, 3)), r(2, 1));
    }

    #[test]
    fn nondegenerate_bound_examples() {
        let p = NetworkParams2x2::symmetric(3, 4);
        assert_eq!(upper_nondegenerate::<Rate>(&p), Some(r(8, 3)));
        assert_eq!(upper_nondegenerate::<Rate>(&NetworkParams2x2::new(4, 2, 5, 3)), None);
        let p = NetworkParams2x2::symmetric(3, 5);
        assert_eq!(upper_nondegenerate::<Rate>(&p), Some(r(10, 3)));
    }

    #[test]
    fn degenerate_capacity_examples() {
        assert_eq!(capacity_degenerate::<Rate>(&NetworkParams2x2::new(4, 2, 5, 3)), Ok(r(2, 1)));
        assert_eq!(capacity_degenerate::<Rate>(&NetworkParams2x2::new(3, 3, 3, 3)), Ok(r(3, 1)));
        assert_eq!(capacity_degenerate::<Rate>(&NetworkParams2x2::new(2, 2, 4, 4)), Ok(r(2, 1)));
        assert!(capacity_degenerate::<Rate>(&NetworkParams2x2::symmetric(3, 4)).is_err());
    }

    #[test]
    fn symmetric_capacity_examples() {
        assert_eq!(capacity_symmetric::<Rate>(3, 5), r(3, 1));
        assert_eq!(capacity_symmetric::<Rate>(3, 4), r(8, 3));
        assert_eq!(capacity_symmetric::<Rate>(4, 4), r(4, 1));
        assert_eq!(capacity_symmetric::<Rate>(0, 0), r(0, 1));
    }

    #[test]
    fn normalized_examples() {
        assert_eq!(normalized_capacity::<Rate>(1, 2), Ok(r(1, 2)));
        assert_eq!(normalized_capacity::<Rate>(3, 4), Ok(r(2, 3)));
        assert_eq!(normalized_capacity::<Rate>(5, 5), Ok(r(1, 1)));
        assert!(normalized_capacity::<Rate>(0, 0).is_err());
    }

    #[test]
    fn separation_examples() {
        assert_eq!(separation_rate::<Rate>(3, 5), r(5, 2));
        assert_eq!(separation_rate::<Rate>(2, 4), r(2, 1));
        assert_eq!(separation_rate::<Rate>(0, 6), r(0, 1));
    }

    #[test]
    fn luser_examples() {
        assert_eq!(luser_linear_capacity::<Rate>(3, 4, 3), Ok(r(2, 1)));
        assert_eq!(luser_upper_bound::<Rate>(3, 4, 3), Ok(r(12, 5)));
        assert_eq!(luser_linear_capacity::<Rate>(5, 5, 4), Ok(r(5, 1)));
        assert_eq!(luser_upper_bound::<Rate>(5, 5, 4), Ok(r(5, 1)));
        assert!(luser_linear_capacity::<Rate>(3, 4, 2).is_err());
        assert!(luser_upper_bound::<Rate>(3, 4, 2).is_err());

        let mut prev: Option<Rate> = None;
        for l in 3..200 {
            let gap = luser_upper_bound::<Rate>(3, 4, l).unwrap()
                - luser_linear_capacity::<Rate>(3, 4, l).unwrap();
            assert!(gap > r(0, 1));
            if let Some(p) = prev {
                assert!(gap < p);
            }
            prev = Some(gap);
        }
        assert!(prev.unwrap() < r(1, 100));
    }

    #[test]
    fn float_evaluation_tracks_exact() {
        for m in 0..=12 {
            for n in 0..=12 {
                let exact = capacity_symmetric::<Rate>(m, n);
                let float = capacity_symmetric::<f64>(m, n);
                let e = *exact.numer() as f64 / *exact.denom() as f64;
                assert!((e - float).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn formula_relations() {
        for m in 0..=20u32 {
            for n in 0..=20u32 {
                let cap = capacity_symmetric::<Rate>(m, n);
                assert_eq!(cap, capacity_symmetric::<Rate>(n, m));
                let sep = separation_rate::<Rate>(m, n);
                assert!(cap >= sep);
                let q = m.max(n);
                if q > 0 && m != n {
                    let p = NetworkParams2x2::symmetric(m, n);
                    let bound = upper_nondegenerate::<Rate>(&p).unwrap();
                    assert!(cap <= bound.min(upper_cutset(&p)));
                    let two_lo = 2 * m.min(n);
                    let strict = two_lo > q && m.min(n) < q;
                    assert_eq!(cap > sep, strict, "(m,n)=({m},{n})");
                }
                for l in 3..=5 {
                    let lin = luser_linear_capacity::<Rate>(m, n, l).unwrap();
                    let up = luser_upper_bound::<Rate>(m, n, l).unwrap();
                    assert!(lin <= up);
                    let eq = m == n || 2 * m.min(n) <= q;
                    assert_eq!(lin == up, eq, "(m,n,L)=({m},{n},{l})");
                }
            }
        }
    }
}
