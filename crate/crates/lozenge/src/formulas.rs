//! Closed-form product formulas for tiling counts: MacMahon's boxed plane
//! partition product, the centrally symmetric counts for bowtie and
//! disconnected-bowtie regions, and the self-complementary plane partition
//! dispatcher.
//!
//! All evaluation is over exact rationals; every complete product must be an
//! integer and this is asserted at runtime, so a parity slip in an argument
//! surfaces immediately instead of rounding away.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("arguments x={x}, y={y}, z={z}, k={k} violate the parity precondition")]
    Parity { x: u32, y: u32, z: u32, k: u32 },
    #[error("lobe size k={k} exceeds min(x, y, z) = {min}")]
    LobeTooLarge { k: u32, min: u32 },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, n: u32) -> BigRational {
    let mut r = BigRational::one();
    let mut term = a.clone();
    for _ in 0..n {
        r *= &term;
        term += BigRational::one();
    }
    r
}

fn integral(r: BigRational, what: &str) -> BigUint {
    assert!(r.is_integer(), "{what} evaluated to the non-integer {r}");
    assert!(!r.is_negative(), "{what} evaluated to the negative {r}");
    r.to_integer().to_biguint().unwrap()
}

/// MacMahon's product: the number of lozenge tilings of the hexagon
/// `H(x, y, z)`, equivalently the number of plane partitions in an
/// `x × y × z` box.
pub fn macmahon(x: u32, y: u32, z: u32) -> BigUint {
    let mut r = BigRational::one();
    for i in 1..=(x as i64) {
        for j in 1..=(y as i64) {
            for k in 1..=(z as i64) {
                r *= BigRational::new(BigInt::from(i + j + k - 1), BigInt::from(i + j + k - 2));
            }
        }
    }
    integral(r, "macmahon")
}

fn macmahon_rat(x: i64, y: i64, z: i64) -> BigRational {
    debug_assert!(x >= 0 && y >= 0 && z >= 0);
    let mut r = BigRational::one();
    for i in 1..=x {
        for j in 1..=y {
            for k in 1..=z {
                r *= BigRational::new(BigInt::from(i + j + k - 1), BigInt::from(i + j + k - 2));
            }
        }
    }
    r
}

/// Number of centrally symmetric lozenge tilings of the bowtie region
/// `B(x, y, z, k)`. Requires `x ≡ y ≡ z ≡ k (mod 2)` and `k ≤ min(x, y, z)`.
pub fn bowtie(x: u32, y: u32, z: u32, k: u32) -> Result<BigUint, FormulaError> {
    let same = |a: u32, b: u32| a % 2 == b % 2;
    if !(same(x, y) && same(y, z) && same(z, k)) {
        return Err(FormulaError::Parity { x, y, z, k });
    }
    if k > x.min(y).min(z) {
        return Err(FormulaError::LobeTooLarge {
            k,
            min: x.min(y).min(z),
        });
    }
    let (x, y, z, k) = (x as i64, y as i64, z as i64, k as i64);
    let mut r = macmahon_rat((y + k) / 2, (z - k) / 2, k);
    for i in 1..=((y - k) / 2) {
        r *= pochhammer(&(half(x - k) + rat(i)), k as u32) / pochhammer(&rat(i), k as u32);
    }
    let gamma = ((y - k) / 2) as u32;
    let delta = ((y + k) / 2) as u32;
    for i in 1..=((z - k) / 2) {
        let top = half(x + k) + rat(i);
        let bottom = rat(k + i);
        r *= pochhammer(&top, gamma) / pochhammer(&bottom, gamma);
        r *= pochhammer(&top, delta) / pochhammer(&bottom, delta);
    }
    Ok(integral(r, "bowtie count"))
}

/// Number of centrally symmetric lozenge tilings of the disconnected bowtie
/// `B'(x, y, z, k)` when the lobe size has the parity of `x` and `z`
/// (opposite to `y`).
pub fn disconnected_bowtie_xparity(
    x: u32,
    y: u32,
    z: u32,
    k: u32,
) -> Result<BigUint, FormulaError> {
    if x % 2 != z % 2 || x % 2 == y % 2 || k % 2 != x % 2 {
        return Err(FormulaError::Parity { x, y, z, k });
    }
    if k > x.min(y).min(z) {
        return Err(FormulaError::LobeTooLarge {
            k,
            min: x.min(y).min(z),
        });
    }
    let (x, y, z, k) = (x as i64, y as i64, z as i64, k as i64);
    let mut r = macmahon_rat((y + k + 1) / 2, (z - k) / 2, k);
    for i in 1..=((y - k - 1) / 2) {
        r *= pochhammer(&(half(x - k) + rat(i)), k as u32) / pochhammer(&rat(i), k as u32);
    }
    let gamma = ((y - k - 1) / 2) as u32;
    let delta = ((y + k + 1) / 2) as u32;
    for i in 1..=((z - k) / 2) {
        let top = half(x + k) + rat(i);
        let bottom = rat(k + i);
        r *= pochhammer(&top, gamma) / pochhammer(&bottom, gamma);
        r *= pochhammer(&top, delta) / pochhammer(&bottom, delta);
    }
    Ok(integral(r, "disconnected bowtie count"))
}

/// Number of centrally symmetric lozenge tilings of the disconnected bowtie
/// `B'(x, y, z, k)` when the lobe size has the parity of `y` (opposite to
/// `x` and `z`).
pub fn disconnected_bowtie_yparity(
    x: u32,
    y: u32,
    z: u32,
    k: u32,
) -> Result<BigUint, FormulaError> {
    if x % 2 != z % 2 || x % 2 == y % 2 || k % 2 != y % 2 {
        return Err(FormulaError::Parity { x, y, z, k });
    }
    if k > x.min(y).min(z) {
        return Err(FormulaError::LobeTooLarge {
            k,
            min: x.min(y).min(z),
        });
    }
    let (x, y, z, k) = (x as i64, y as i64, z as i64, k as i64);
    let mut r = macmahon_rat((y + k) / 2, (z - k - 1) / 2, k + 1);
    for i in 1..=((z - k - 1) / 2) {
        r *= pochhammer(&(half(x + k + 1) + rat(i)), k as u32)
            / pochhammer(&rat(k + i + 1), k as u32);
    }
    let long = ((z + k + 1) / 2) as u32;
    let short = ((z - k - 1) / 2) as u32;
    for i in 1..=((y - k) / 2) {
        r *= pochhammer(&(half(x - k - 1) + rat(i)), long) / pochhammer(&rat(i), long);
        r *= pochhammer(&(half(x + k + 1) + rat(k + i)), short)
            / pochhammer(&rat(2 * k + i + 1), short);
    }
    Ok(integral(r, "disconnected bowtie count"))
}

/// Dispatcher over the two parity classes of `B'(x, y, z, k)`.
pub fn disconnected_bowtie(x: u32, y: u32, z: u32, k: u32) -> Result<BigUint, FormulaError> {
    if k % 2 == x % 2 {
        disconnected_bowtie_xparity(x, y, z, k)
    } else {
        disconnected_bowtie_yparity(x, y, z, k)
    }
}

/// Number of self-complementary plane partitions in an `x × y × z` box,
/// equivalently the number of centrally symmetric lozenge tilings of
/// `H(x, y, z)`. Dispatches on the side parities, permuting the sides by a
/// hexagon symmetry when needed; with all three sides odd the count is zero.
pub fn self_complementary(x: u32, y: u32, z: u32) -> BigUint {
    let odd = [x, y, z].iter().filter(|s| *s % 2 == 1).count();
    match odd {
        0 => bowtie(x, y, z, 0).unwrap(),
        3 => BigUint::ZERO,
        1 => {
            // rotate the odd side into the middle slot
            let (a, b, c) = if x % 2 == 1 {
                (y, x, z)
            } else if y % 2 == 1 {
                (x, y, z)
            } else {
                (x, z, y)
            };
            disconnected_bowtie_xparity(a, b, c, 0).unwrap()
        }
        _ => {
            // rotate the even side into the middle slot
            let (a, b, c) = if x % 2 == 0 {
                (y, x, z)
            } else if y % 2 == 0 {
                (x, y, z)
            } else {
                (x, z, y)
            };
            disconnected_bowtie_yparity(a, b, c, 0).unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn macmahon_values() {
        assert_eq!(macmahon(0, 5, 7), n(1));
        assert_eq!(macmahon(1, 1, 1), n(2));
        assert_eq!(macmahon(2, 2, 2), n(20));
        assert_eq!(macmahon(3, 3, 3), n(980));
        assert_eq!(macmahon(4, 4, 4), n(232_848));
        assert_eq!(macmahon(1, 2, 3), n(10));
        assert_eq!(macmahon(2, 3, 2), n(50));
    }

    #[test]
    fn macmahon_is_symmetric() {
        for (x, y, z) in [(1, 2, 3), (2, 4, 1), (3, 1, 5)] {
            let v = macmahon(x, y, z);
            assert_eq!(macmahon(x, z, y), v);
            assert_eq!(macmahon(y, x, z), v);
            assert_eq!(macmahon(y, z, x), v);
            assert_eq!(macmahon(z, x, y), v);
            assert_eq!(macmahon(z, y, x), v);
        }
    }

    #[test]
    fn pochhammer_values() {
        let a = BigRational::new(BigInt::from(7), BigInt::from(3));
        assert_eq!(pochhammer(&a, 0), BigRational::one());
        // (1)_n = n!
        assert_eq!(pochhammer(&rat(1), 5), rat(120));
        // (3/2)_2 = 15/4
        assert_eq!(
            pochhammer(&BigRational::new(BigInt::from(3), BigInt::from(2)), 2),
            BigRational::new(BigInt::from(15), BigInt::from(4))
        );
    }

    #[test]
    fn bowtie_values() {
        assert_eq!(bowtie(2, 2, 2, 0).unwrap(), n(4));
        assert_eq!(bowtie(0, 4, 2, 0).unwrap(), n(1));
        assert_eq!(bowtie(1, 3, 3, 1).unwrap(), n(3));
        assert_eq!(bowtie(2, 2, 2, 2).unwrap(), n(1));
        assert_eq!(bowtie(4, 4, 4, 0).unwrap(), n(400));
        assert_eq!(bowtie(4, 4, 4, 2).unwrap(), n(80));
        assert_eq!(bowtie(3, 3, 3, 3).unwrap(), n(1));
        assert_eq!(bowtie(6, 6, 6, 2).unwrap(), n(185_220));
    }

    #[test]
    fn bowtie_x1_base_case_reduces_to_a_hexagon_count() {
        // with x = k = 1 the count collapses to a thin hexagon's
        for (y, z) in [(3, 3), (3, 5), (5, 3), (5, 7)] {
            assert_eq!(
                bowtie(1, y, z, 1).unwrap(),
                macmahon(1, (y + 1) / 2, (z - 1) / 2)
            );
        }
    }

    #[test]
    fn bowtie_is_symmetric_in_x_and_y() {
        for (x, y, z, k) in [(2, 4, 2, 2), (4, 2, 6, 0), (1, 5, 3, 1), (3, 5, 5, 3)] {
            assert_eq!(bowtie(x, y, z, k).unwrap(), bowtie(y, x, z, k).unwrap());
        }
    }

    #[test]
    fn bowtie_rejects_bad_parameters() {
        assert!(matches!(
            bowtie(2, 3, 2, 0),
            Err(FormulaError::Parity { .. })
        ));
        assert!(matches!(
            bowtie(2, 2, 2, 1),
            Err(FormulaError::Parity { .. })
        ));
        assert!(matches!(
            bowtie(2, 2, 4, 4),
            Err(FormulaError::LobeTooLarge { .. })
        ));
    }

    #[test]
    fn disconnected_bowtie_xparity_values() {
        assert_eq!(disconnected_bowtie_xparity(2, 1, 2, 0).unwrap(), n(2));
        assert_eq!(disconnected_bowtie_xparity(1, 2, 3, 1).unwrap(), n(3));
        assert_eq!(disconnected_bowtie_xparity(4, 5, 4, 2).unwrap(), n(140));
        assert_eq!(disconnected_bowtie_xparity(3, 4, 3, 1).unwrap(), n(30));
        assert_eq!(disconnected_bowtie_xparity(2, 3, 2, 0).unwrap(), n(6));
        assert_eq!(disconnected_bowtie_xparity(5, 2, 5, 1).unwrap(), n(50));
        assert_eq!(disconnected_bowtie_xparity(4, 3, 2, 0).unwrap(), n(18));
    }

    #[test]
    fn disconnected_bowtie_xparity_base_cases() {
        // y = 1, k = 0: the hexagon H(x, 1, z)
        for (x, z) in [(2, 2), (2, 4), (4, 2), (4, 6)] {
            assert_eq!(
                disconnected_bowtie_xparity(x, 1, z, 0).unwrap(),
                macmahon(x / 2, 1, z / 2)
            );
        }
        // x = k = 1: a thin hexagon again
        for (y, z) in [(2, 3), (4, 3), (2, 5)] {
            assert_eq!(
                disconnected_bowtie_xparity(1, y, z, 1).unwrap(),
                macmahon(1, (y + 2) / 2, (z - 1) / 2)
            );
        }
    }

    #[test]
    fn disconnected_bowtie_yparity_values() {
        assert_eq!(disconnected_bowtie_yparity(2, 1, 2, 1).unwrap(), n(1));
        assert_eq!(disconnected_bowtie_yparity(2, 1, 4, 1).unwrap(), n(3));
        assert_eq!(disconnected_bowtie_yparity(4, 1, 4, 1).unwrap(), n(4));
        assert_eq!(disconnected_bowtie_yparity(1, 2, 1, 0).unwrap(), n(1));
        assert_eq!(disconnected_bowtie_yparity(3, 2, 1, 0).unwrap(), n(2));
        assert_eq!(disconnected_bowtie_yparity(3, 2, 3, 0).unwrap(), n(9));
        assert_eq!(disconnected_bowtie_yparity(5, 4, 5, 0).unwrap(), n(2500));
        assert_eq!(disconnected_bowtie_yparity(3, 4, 3, 2).unwrap(), n(1));
        assert_eq!(disconnected_bowtie_yparity(4, 3, 4, 1).unwrap(), n(40));
        assert_eq!(disconnected_bowtie_yparity(6, 1, 4, 1).unwrap(), n(5));
        assert_eq!(disconnected_bowtie_yparity(4, 3, 4, 3).unwrap(), n(1));
        assert_eq!(disconnected_bowtie_yparity(2, 3, 2, 1).unwrap(), n(1));
    }

    #[test]
    fn disconnected_bowtie_yparity_base_cases() {
        // x = 1, k = 0: the hexagon H(1, y, z)
        for (y, z) in [(2, 1), (2, 3), (4, 3), (2, 5)] {
            assert_eq!(
                disconnected_bowtie_yparity(1, y, z, 0).unwrap(),
                macmahon(1, y / 2, (z - 1) / 2)
            );
        }
        // y = k = 1: forced through the lobes
        for (x, z) in [(2, 2), (2, 4), (4, 4), (6, 4)] {
            assert_eq!(
                disconnected_bowtie_yparity(x, 1, z, 1).unwrap(),
                macmahon(x / 2 + 1, 1, z / 2 - 1)
            );
        }
    }

    #[test]
    fn disconnected_bowtie_dispatch() {
        assert_eq!(disconnected_bowtie(2, 1, 2, 0).unwrap(), n(2));
        assert_eq!(disconnected_bowtie(2, 1, 2, 1).unwrap(), n(1));
        assert!(disconnected_bowtie(2, 2, 2, 0).is_err());
    }

    #[test]
    fn self_complementary_values() {
        assert_eq!(self_complementary(0, 0, 0), n(1));
        assert_eq!(self_complementary(2, 2, 2), n(4));
        assert_eq!(self_complementary(3, 3, 3), n(0));
        assert_eq!(self_complementary(2, 1, 2), n(2));
        assert_eq!(self_complementary(1, 1, 1), n(0));
        assert_eq!(self_complementary(2, 2, 3), n(6));
        assert_eq!(self_complementary(2, 3, 3), n(9));
        assert_eq!(self_complementary(4, 4, 4), n(400));
        assert_eq!(self_complementary(4, 5, 4), n(1000));
        assert_eq!(self_complementary(5, 4, 5), n(2500));
        assert_eq!(self_complementary(3, 4, 5), n(200));
    }

    #[test]
    fn self_complementary_is_permutation_invariant() {
        for (x, y, z) in [(2, 3, 4), (1, 2, 2), (3, 3, 2), (5, 2, 4), (1, 2, 3)] {
            let v = self_complementary(x, y, z);
            for (a, b, c) in [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
                assert_eq!(self_complementary(a, b, c), v, "at {:?}", (a, b, c));
            }
        }
    }
}
