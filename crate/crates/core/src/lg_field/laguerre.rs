use crate::scalar::Real;

/// Generalized Laguerre polynomial `L_p^alpha(x)` by the three-term recurrence in `p`.
///
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`
pub fn laguerre<T: Real>(p: u32, alpha: u32, x: T) -> T {
    let a = T::from_u32(alpha).unwrap();
    let mut prev = T::one();
    if p == 0 {
        return prev;
    }
    let mut cur = T::one() + a - x;
    for k in 1..p {
        let kf = T::from_u32(k).unwrap();
        let next = ((kf + kf + T::one() + a - x) * cur - (kf + a) * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[k] = L_k^alpha(x)` for `k = 0..out.len()`.
pub fn laguerre_sequence<T: Real>(alpha: u32, x: T, out: &mut [T]) {
    if out.is_empty() {
        return;
    }
    let a = T::from_u32(alpha).unwrap();
    out[0] = T::one();
    if out.len() == 1 {
        return;
    }
    out[1] = T::one() + a - x;
    for k in 1..out.len() - 1 {
        let kf = T::from_usize_lossy(k);
        out[k + 1] = ((kf + kf + T::one() + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + T::one());
    }
}
