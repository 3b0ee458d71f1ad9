//! Seeded random instances for the property suites.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::exact::{Int, Rat};
use crate::poly::{BinomPoly, Poly};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Derives an independent seed for sub-task `index` of a run.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

pub fn rat_in(rng: &mut StdRng, num: i64, den_max: i64) -> Rat {
    Rat::new(Int::from(rng.gen_range(-num..=num)), Int::from(rng.gen_range(1..=den_max)))
}

/// Monomial coefficients `a/b` with `|a| <= num`, `1 <= b <= den_max`.
pub fn poly(rng: &mut StdRng, max_deg: usize, num: i64, den_max: i64) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs((0..=deg).map(|_| rat_in(rng, num, den_max)).collect())
}

/// Binomial coordinates `a/d` with `d` a divisor of `den`; members of
/// Int(Z) turn up often, which keeps both verdicts well represented.
pub fn binomial_candidate(rng: &mut StdRng, max_deg: usize, num: i64, den: i64) -> Poly {
    let divisors: Vec<i64> = (1..=den).filter(|d| den % d == 0).collect();
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<Rat> = (0..=deg)
        .map(|_| {
            let d = if rng.gen_bool(0.5) {
                1
            } else {
                divisors[rng.gen_range(0..divisors.len())]
            };
            Rat::new(Int::from(rng.gen_range(-num..=num)), Int::from(d))
        })
        .collect();
    BinomPoly::from_coeffs(coeffs).to_poly()
}

/// A random element of the lattice spanned by `rows` (binomial coordinates).
pub fn lattice_member(rng: &mut StdRng, rows: &[BinomPoly], span: i64) -> Poly {
    rows.iter().fold(Poly::zero(), |acc, r| {
        let c = Rat::from_integer(Int::from(rng.gen_range(-span..=span)));
        &acc + &r.to_poly().scale(&c)
    })
}

pub fn int_in(rng: &mut StdRng, lo: i64, hi: i64) -> Int {
    Int::from(rng.gen_range(lo..=hi))
}
