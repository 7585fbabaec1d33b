use rand::Rng;

use super::Individual;
use crate::error::{Error, Result};

/// Binary tournament on (rank, crowding): lower rank wins, then larger
/// crowding distance, then a fair coin.
pub fn tournament_select<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> Result<usize> {
    if population.is_empty() {
        return Err(Error::Usage("tournament selection on an empty population".into()));
    }
    let i = rng.random_range(0..population.len());
    let j = rng.random_range(0..population.len());
    let (a, b) = (&population[i], &population[j]);
    let winner = if a.rank != b.rank {
        if a.rank < b.rank {
            i
        } else {
            j
        }
    } else if a.crowding != b.crowding {
        if a.crowding > b.crowding {
            i
        } else {
            j
        }
    } else if rng.random_bool(0.5) {
        i
    } else {
        j
    };
    Ok(winner)
}
