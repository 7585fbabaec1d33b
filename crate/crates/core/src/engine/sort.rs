use super::objectives::ObjectiveVector;
use super::Individual;

/// Nondominated fronts of `objectives` (indices), best front first.
///
/// Deb's bookkeeping: domination counts and dominated-sets, O(M N^2).
pub fn nondominated_fronts(objectives: &[&ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if objectives[i].dominates_unchecked(objectives[j]) {
                dominated_by[i].push(j);
                counts[j] += 1;
            } else if objectives[j].dominates_unchecked(objectives[i]) {
                dominated_by[j].push(i);
                counts[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Sorts `population` into fronts and writes each individual's rank.
///
/// Panics if an individual has not been evaluated.
pub fn fast_nondominated_sort(population: &mut [Individual]) -> Vec<Vec<usize>> {
    let objs: Vec<&ObjectiveVector> = population
        .iter()
        .map(|ind| ind.objectives.as_ref().expect("individual not evaluated"))
        .collect();
    let fronts = nondominated_fronts(&objs);
    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            population[i].rank = rank;
        }
    }
    fronts
}

/// Crowding distances of a set of objective vectors, in input order.
///
/// Extremes of every objective get `+inf`; interior points accumulate the
/// normalised gap between their neighbours. An objective with zero or
/// non-finite range contributes nothing to interior points.
pub fn crowding_distances(objectives: &[&ObjectiveVector]) -> Vec<f64> {
    let n = objectives.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let arity = objectives[0].len();
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    #[allow(clippy::needless_range_loop)]
    for m in 0..arity {
        order.sort_by(|&a, &b| objectives[a][m].total_cmp(&objectives[b][m]).then(a.cmp(&b)));
        let lo = objectives[order[0]][m];
        let hi = objectives[order[n - 1]][m];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if !(range.is_finite() && range > 0.0) {
            continue;
        }
        for k in 1..n - 1 {
            let gap = objectives[order[k + 1]][m] - objectives[order[k - 1]][m];
            if gap.is_finite() {
                distance[order[k]] += gap / range;
            }
        }
    }
    distance
}

/// Writes crowding distances for the members of `front`.
pub fn crowding_distance(population: &mut [Individual], front: &[usize]) {
    let objs: Vec<&ObjectiveVector> = front
        .iter()
        .map(|&i| population[i].objectives.as_ref().expect("individual not evaluated"))
        .collect();
    let d = crowding_distances(&objs);
    for (&i, c) in front.iter().zip(d) {
        population[i].crowding = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ovs(v: &[&[f64]]) -> Vec<ObjectiveVector> {
        v.iter().map(|x| ObjectiveVector(x.to_vec())).collect()
    }

    /// Peel fronts by exhaustive pairwise domination.
    fn brute_force_fronts(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..objs.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| j != i && objs[j].dominates_unchecked(&objs[i]))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    fn sorted(mut fronts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        fronts.iter_mut().for_each(|f| f.sort_unstable());
        fronts
    }

    #[test]
    fn singletons_and_pairs() {
        let one = ovs(&[&[1.0, 2.0]]);
        assert_eq!(nondominated_fronts(&one.iter().collect::<Vec<_>>()), vec![vec![0]]);
        let two = ovs(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert_eq!(
            sorted(nondominated_fronts(&two.iter().collect::<Vec<_>>())),
            vec![vec![0, 1]]
        );
    }

    #[test]
    fn random_population_matches_oracle() {
        use rand::Rng;
        let mut rng = crate::rng::seeded(20);
        let objs: Vec<ObjectiveVector> = (0..20)
            .map(|_| ObjectiveVector(vec![rng.random_range(0..6) as f64, rng.random_range(0..6) as f64]))
            .collect();
        let refs: Vec<&ObjectiveVector> = objs.iter().collect();
        assert_eq!(sorted(nondominated_fronts(&refs)), sorted(brute_force_fronts(&objs)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn sort_matches_brute_force(
            arity in 2usize..=3,
            raw in proptest::collection::vec(proptest::collection::vec(0u8..8, 3), 1..=30),
        ) {
            let objs: Vec<ObjectiveVector> = raw
                .iter()
                .map(|r| ObjectiveVector(r[..arity].iter().map(|&x| x as f64).collect()))
                .collect();
            let refs: Vec<&ObjectiveVector> = objs.iter().collect();
            prop_assert_eq!(sorted(nondominated_fronts(&refs)), sorted(brute_force_fronts(&objs)));
        }
    }

    #[test]
    fn small_fronts_are_all_infinite() {
        let objs = ovs(&[&[1.0, 2.0], &[2.0, 1.0]]);
        let d = crowding_distances(&objs.iter().collect::<Vec<_>>());
        assert!(d.iter().all(|x| x.is_infinite()));
    }

    #[test]
    fn collinear_middle_point_gets_two() {
        let objs = ovs(&[&[0.0, 2.0], &[1.0, 1.0], &[2.0, 0.0]]);
        let d = crowding_distances(&objs.iter().collect::<Vec<_>>());
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn identical_vectors_have_zero_interior_distance() {
        let objs = ovs(&[&[1.0, 1.0] as &[f64]; 5]);
        let d = crowding_distances(&objs.iter().collect::<Vec<_>>());
        assert_eq!(d.iter().filter(|x| x.is_infinite()).count(), 2);
        assert_eq!(d.iter().filter(|&&x| x == 0.0).count(), 3);
    }

    #[test]
    fn penalised_members_do_not_poison_distances() {
        let objs = [
            ObjectiveVector(vec![0.0, 2.0]),
            ObjectiveVector(vec![1.0, 1.0]),
            ObjectiveVector::worst(2),
            ObjectiveVector::worst(2),
        ];
        let d = crowding_distances(&objs.iter().collect::<Vec<_>>());
        assert!(d.iter().all(|x| !x.is_nan()));
    }
}
