use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TannerGraph;
use crate::error::{Error, Result};

/// Number of socket permutations tried before giving up on a simple graph.
pub const MAX_RESAMPLE_ATTEMPTS: usize = 10_000;

/// Samples a `(dl, dr)`-regular Tanner graph on `n` variables from the
/// configuration model.
///
/// Variable sockets are matched to check sockets by a uniformly random
/// permutation. Permutations that put the same variable twice into one check
/// are discarded and the whole permutation is redrawn, so the declared
/// degrees hold exactly.
pub fn sample_regular(n: usize, dl: usize, dr: usize, seed: u64) -> Result<TannerGraph> {
    if n == 0 || dl == 0 || dr < 2 {
        return Err(Error::Sampling(format!(
            "degenerate parameters n={n}, dl={dl}, dr={dr}"
        )));
    }
    if !(n * dl).is_multiple_of(dr) {
        return Err(Error::Sampling(format!(
            "n·dl = {} is not divisible by dr = {dr}",
            n * dl
        )));
    }
    let m = n * dl / dr;
    if dr > n {
        return Err(Error::Sampling(format!("dr = {dr} exceeds n = {n}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sockets: Vec<usize> = (0..n * dl).map(|s| s / dl).collect();
    let mut seen = vec![usize::MAX; n];
    'attempt: for _ in 0..MAX_RESAMPLE_ATTEMPTS {
        sockets.shuffle(&mut rng);
        for (c, chunk) in sockets.chunks(dr).enumerate() {
            for &v in chunk {
                if seen[v] == c {
                    seen.fill(usize::MAX);
                    continue 'attempt;
                }
                seen[v] = c;
            }
        }
        seen.fill(usize::MAX);
        let checks: Vec<Vec<usize>> = sockets.chunks(dr).map(<[usize]>::to_vec).collect();
        debug_assert_eq!(checks.len(), m);
        return TannerGraph::from_checks(n, checks);
    }
    Err(Error::Sampling(format!(
        "no simple ({dl},{dr})-regular graph on {n} variables after {MAX_RESAMPLE_ATTEMPTS} attempts"
    )))
}
