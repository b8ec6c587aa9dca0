//! Word-sized modular helpers and binomial coefficients modulo a prime.

/// Deterministic trial-division primality test; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce_i64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// Base-`p` digits of `k`, least significant first.
pub fn digits(mut k: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while k > 0 {
        out.push(k % p);
        k /= p;
    }
    out
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1;
    let mut den = 1;
    for i in 0..k {
        num = mul_mod(num, (n - i) % p, p);
        den = mul_mod(den, (i + 1) % p, p);
    }
    mul_mod(num, inv_mod(den, p).expect("digit factorials are units"), p)
}

/// `C(k, j) mod p` as a product of binomials of base-`p` digits.
pub fn lucas_binom(mut k: u64, mut j: u64, p: u64) -> u64 {
    let mut acc = 1;
    while j > 0 || k > 0 {
        let (kd, jd) = (k % p, j % p);
        if jd > kd {
            return 0;
        }
        acc = mul_mod(acc, small_binom_mod(kd, jd, p), p);
        k /= p;
        j /= p;
    }
    acc
}

/// `C(x, m) mod p` for any integer `x` (generalized binomial
/// `x(x-1)...(x-m+1)/m!`), computed from the falling factorial by stripping
/// `p`-adic valuations. Independent of the digit-wise Lucas route.
pub fn binom_falling_mod(x: i64, m: u64, p: u64) -> u64 {
    let mut val = 0i64;
    let mut unit = 1u64;
    for t in 0..m {
        let mut f = x as i128 - t as i128;
        if f == 0 {
            return 0;
        }
        let mut g = (t + 1) as i128;
        while f % p as i128 == 0 {
            f /= p as i128;
            val += 1;
        }
        while g % p as i128 == 0 {
            g /= p as i128;
            val -= 1;
        }
        let fr = f.rem_euclid(p as i128) as u64;
        let gr = g.rem_euclid(p as i128) as u64;
        unit = mul_mod(unit, fr, p);
        unit = mul_mod(unit, inv_mod(gr, p).expect("unit part"), p);
    }
    debug_assert!(val >= 0);
    if val > 0 {
        0
    } else {
        unit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(6, 5, 5), 1);
        assert_eq!(lucas_binom(17, 0, 5), 1);
        assert_eq!(lucas_binom(5, 3, 5), 0);
        assert_eq!(lucas_binom(3, 5, 7), 0);
    }

    #[test]
    fn falling_matches_lucas_on_nonnegative() {
        for p in [3u64, 5, 7] {
            for x in 0..120u64 {
                for m in 0..40u64 {
                    assert_eq!(binom_falling_mod(x as i64, m, p), lucas_binom(x, m, p), "{x} {m} {p}");
                }
            }
        }
    }

    #[test]
    fn falling_negative_argument() {
        // C(-1, m) = (-1)^m
        for m in 0..10 {
            let want = if m % 2 == 0 { 1 } else { 4 };
            assert_eq!(binom_falling_mod(-1, m, 5), want);
        }
        // C(-2, 3) = -4
        assert_eq!(binom_falling_mod(-2, 3, 7), reduce_i64(-4, 7));
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(5, 25), None);
        assert_eq!(inv_mod(7, 25), Some(18));
    }
}
