use super::{factor, square_part_root};

/// Kronecker symbol `(a | n)`, the full extension of the Jacobi symbol.
///
/// Conventions: `(a | 0) = 1` iff `a = ±1`; `(a | -1) = sign(a)` (with `(0 | -1) = 1`);
/// `(a | 2) = 0` for even `a` and `±1` by `a mod 8` otherwise.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    result * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol for odd positive `n` and `0 <= a < n`.
fn jacobi(mut a: i64, mut n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `d` is a fundamental discriminant: `d ≡ 1 (mod 4)` squarefree, or `d = 4m`
/// with `m ≡ 2, 3 (mod 4)` squarefree. `1` counts as fundamental.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let sqfree = |m: i64| factor(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => sqfree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sqfree(m)
        }
        _ => false,
    }
}

/// Writes a discriminant `disc ≡ 0, 1 (mod 4)` as `disc = d0 * f^2` with `d0` fundamental.
pub fn fundamental_discriminant_decomposition(disc: i64) -> Option<(i64, u64)> {
    if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return None;
    }
    let s = square_part_root(disc.unsigned_abs());
    let t = disc / (s * s) as i64;
    if t.rem_euclid(4) == 1 {
        Some((t, s))
    } else {
        Some((4 * t, s / 2))
    }
}
