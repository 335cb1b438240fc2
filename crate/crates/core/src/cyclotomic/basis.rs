use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Power-basis data for `Q[x]/Φ_n`: the coefficients of `Φ_n` and the
/// reduced form of every `x^i`, `0 <= i < n`.
#[derive(Debug)]
pub(crate) struct CycloBasis {
    pub degree: usize,
    pub phi: Vec<i64>,
    /// `powers[i]` lists the nonzero `(j, c)` with `x^i ≡ Σ c x^j`.
    pub powers: Vec<Vec<(usize, i64)>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1] / lead;
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn phi_coeffs(n: u32, cache: &mut HashMap<u32, Arc<CycloBasis>>) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let b = build(d, cache);
            num = poly_div_exact(&num, &b.phi);
        }
    }
    num
}

fn build(n: u32, cache: &mut HashMap<u32, Arc<CycloBasis>>) -> Arc<CycloBasis> {
    if let Some(b) = cache.get(&n) {
        return b.clone();
    }
    let phi = phi_coeffs(n, cache);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; degree];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect());
        // multiply by x and reduce with the monic Φ_n
        let top = cur[degree - 1];
        for j in (1..degree).rev() {
            cur[j] = cur[j - 1] - top * phi[j];
        }
        cur[0] = -top * phi[0];
    }
    let b = Arc::new(CycloBasis { degree, phi, powers });
    cache.insert(n, b.clone());
    b
}

const FAST_SLOTS: usize = 4097;

/// Cached basis data for conductor `n >= 1`.
pub(crate) fn basis(n: u32) -> Arc<CycloBasis> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloBasis>>>> = OnceLock::new();
    static SLOTS: OnceLock<Vec<OnceLock<Arc<CycloBasis>>>> = OnceLock::new();
    assert!(n >= 1, "conductor must be positive");
    let slow = || build(n, &mut CACHE.get_or_init(Default::default).lock().unwrap());
    if (n as usize) < FAST_SLOTS {
        let slots = SLOTS.get_or_init(|| (0..FAST_SLOTS).map(|_| OnceLock::new()).collect());
        slots[n as usize].get_or_init(slow).clone()
    } else {
        slow()
    }
}
