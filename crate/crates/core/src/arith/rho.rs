//! Pollard rho, Brent's cycle-finding variant with batched gcds.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha8Rng;

use super::modular::{BigMod, ModRing, Mont128, Mont64};
use super::random_below;

const BATCH: u64 = 256;

/// Outcome of a capped rho run on one composite.
pub(crate) enum RhoOutcome {
    Factor(BigUint),
    Exhausted,
}

/// Searches for a proper factor of the odd composite `n`, spending at most
/// `cap` iterations of the map y -> y^2 + c across all restarts.
pub(crate) fn find_factor(n: &BigUint, cap: u64, rng: &mut ChaCha8Rng) -> RhoOutcome {
    if n.bits() <= 64 {
        brent(&Mont64::new(n.to_u64().unwrap()), cap, rng)
    } else if n.bits() <= Mont128::LIMIT_BITS {
        brent(&Mont128::new(n.to_u128().unwrap()), cap, rng)
    } else {
        brent(&BigMod::new(n.clone()), cap, rng)
    }
}

fn brent<R: ModRing>(ring: &R, cap: u64, rng: &mut ChaCha8Rng) -> RhoOutcome {
    let n = ring.modulus();
    let one = BigUint::one();
    let mut spent: u64 = 0;
    while spent < cap {
        let c = ring.lift(&(random_below(rng, &(&n - 1u32)) + 1u32));
        let mut y = ring.lift(&random_below(rng, &n));
        let step = |v: &R::Elem| ring.add(&ring.mul(v, v), &c);

        let mut g;
        let mut r: u64 = 1;
        let mut q = ring.one();
        let mut x;
        let mut ys;
        'outer: loop {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            spent += r;
            let mut k = 0;
            loop {
                ys = y.clone();
                let batch = BATCH.min(r - k);
                for _ in 0..batch {
                    y = step(&y);
                    q = ring.mul(&q, &ring.sub(&x, &y));
                }
                spent += batch;
                g = ring.gcd_modulus(&q);
                k += batch;
                if k >= r || g != one {
                    break;
                }
                if spent >= cap {
                    break 'outer;
                }
            }
            if g != one || spent >= cap {
                break;
            }
            r *= 2;
        }
        if g == one {
            return RhoOutcome::Exhausted;
        }
        if g == n {
            // The batch overshot; replay it one gcd at a time.
            loop {
                ys = step(&ys);
                spent += 1;
                g = ring.gcd_modulus(&ring.sub(&x, &ys));
                if g != one {
                    break;
                }
            }
        }
        if g != n {
            return RhoOutcome::Factor(g);
        }
    }
    RhoOutcome::Exhausted
}
