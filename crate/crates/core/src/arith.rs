//! Elementary arithmetic: modular inverses, additive characters,
//! Kloosterman sums, Möbius and divisor functions.

use crate::error::{Error, Result};
use crate::ComplexValue;
use std::f64::consts::TAU;

/// A modulus `c ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::invalid("modulus must be >= 1"));
        }
        Ok(Modulus(c))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

/// Returns `(g, x)` with `g = gcd(a, m)` and `a x ≡ g (mod m)`.
fn ext_gcd(a: i128, m: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// `n*` in `[0, c)` with `n n* ≡ 1 (mod c)`; `0` when `c = 1`.
pub fn mod_inverse(n: i64, c: Modulus) -> Result<u64> {
    let m = c.get() as i128;
    if m == 1 {
        return Ok(0);
    }
    let a = (n as i128).rem_euclid(m);
    let (g, x) = ext_gcd(a, m);
    if g != 1 {
        return Err(Error::NotInvertible { n, c: c.get() });
    }
    Ok(x.rem_euclid(m) as u64)
}

/// `e(a / c) = exp(2πi a / c)`, with `a` reduced modulo `c` exactly first.
pub fn additive_character(a: i128, c: Modulus) -> ComplexValue {
    let m = c.get() as i128;
    let r = a.rem_euclid(m);
    if r == 0 {
        return ComplexValue::new(1.0, 0.0);
    }
    // fold to (-c/2, c/2] to keep the angle small
    let r = if 2 * r > m { r - m } else { r };
    let (s, co) = (TAU * (r as f64 / m as f64)).sin_cos();
    ComplexValue::new(co, s)
}

/// `e(n* l / c)`.
pub fn additive_twist(n_star: i64, l: i64, c: Modulus) -> ComplexValue {
    additive_character(n_star as i128 * l as i128, c)
}

/// Classical Kloosterman sum `S(m, n; c) = Σ_{x mod c, (x,c)=1} e((m x + n x*) / c)`.
pub fn kloosterman(m: i64, n: i64, c: Modulus) -> f64 {
    let cc = c.get();
    if cc == 1 {
        return 1.0;
    }
    let mut re = crate::specfun::KahanSum::new();
    let mut im = crate::specfun::KahanSum::new();
    for x in 1..cc {
        if gcd(x, cc) != 1 {
            continue;
        }
        let xs = mod_inverse(x as i64, c).expect("coprime by construction");
        let phase = m as i128 * x as i128 + n as i128 * xs as i128;
        let e = additive_character(phase, c);
        re.add(e.re);
        im.add(e.im);
    }
    debug_assert!(im.value().abs() <= 1e-10 * (cc as f64).max(1.0), "Im S = {}", im.value());
    re.value()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization `[(p, e)]` by trial division on a 2-3-5 wheel.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if m <= 1 {
        return out;
    }
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    const GAPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += GAPS[i];
        i = (i + 1) % GAPS.len();
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Möbius function.
pub fn mobius(m: u64) -> i32 {
    assert!(m >= 1, "mobius is defined for m >= 1");
    let f = factorize(m);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sum of divisors `σ(m)`.
pub fn sigma(m: u64) -> u64 {
    assert!(m >= 1, "sigma is defined for m >= 1");
    factorize(m)
        .iter()
        .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

/// Number of divisors `d(m)`.
pub fn divisor_count(m: u64) -> u64 {
    assert!(m >= 1, "divisor_count is defined for m >= 1");
    factorize(m).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Möbius values `μ(1..=n)` by a linear sieve; index 0 is unused.
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut is_composite = vec![false; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        mu[0] = 0;
    }
    for i in 2..=n {
        if !is_composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            is_composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}
