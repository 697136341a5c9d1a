//! Small integer helpers used by the group and counting code.

/// Greatest common divisor, always nonnegative. `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g` and `g = gcd(a, b) >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, x, y) = egcd(b, a % b);
    (g, y, x - (a / b) * y)
}

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, sorted increasingly.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p - 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(-12, 18), 6);
        assert_eq!(gcd(35, -49), 7);
    }

    #[test]
    fn egcd_is_a_bezout_identity() {
        for a in -30i64..=30 {
            for b in -30i64..=30 {
                let (g, x, y) = egcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(a * x + b * y, g, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn divisors_and_phi() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(37), vec![1, 37]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(37), 36);
        // phi via brute force for a range
        for n in 1u64..=200 {
            let brute = (1..=n).filter(|k| gcd(*k as i64, n as i64) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute, "n={n}");
        }
    }

    #[test]
    fn factorize_recombines() {
        for n in 1u64..=500 {
            let prod: u64 = factorize(n).iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(prod, n);
        }
    }
}
