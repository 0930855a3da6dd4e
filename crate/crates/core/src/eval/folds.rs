//! Repeated stratified k-fold index generation.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_from};
use crate::tabular::LabeledTable;

/// Index pairs `(train, test)` for `repeats` independent stratified
/// partitions into `folds` folds.
///
/// Within one repeat every row lands in exactly one test fold and per-fold
/// positive counts stay within one of exact proportionality (round-robin
/// dealing after a seeded shuffle of each class). Indices are sorted
/// ascending inside each set.
pub fn stratified_kfold(
    table: &LabeledTable,
    folds: usize,
    repeats: usize,
    seed: u64,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if folds < 2 {
        return Err(Error::invalid("folds must be at least 2"));
    }
    if repeats < 1 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    let positives: Vec<usize> = (0..table.n_rows()).filter(|&i| table.label(i) == 1).collect();
    let negatives: Vec<usize> = (0..table.n_rows()).filter(|&i| table.label(i) == 0).collect();
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::SingleClass);
    }
    if positives.len() < folds {
        return Err(Error::ClassTooSmall(format!(
            "{} minority rows cannot stratify {} folds",
            positives.len(),
            folds
        )));
    }

    let mut out = Vec::with_capacity(folds * repeats);
    for repeat in 0..repeats {
        let mut rng = rng_from(derive_seed(seed, "kfold-repeat", repeat as u64));
        let mut pos = positives.clone();
        let mut neg = negatives.clone();
        pos.shuffle(&mut rng);
        neg.shuffle(&mut rng);

        let mut test_sets: Vec<Vec<usize>> = vec![Vec::new(); folds];
        for (i, &idx) in pos.iter().enumerate() {
            test_sets[i % folds].push(idx);
        }
        for (i, &idx) in neg.iter().enumerate() {
            test_sets[i % folds].push(idx);
        }

        for fold in 0..folds {
            let mut test = test_sets[fold].clone();
            test.sort_unstable();
            let mut train: Vec<usize> = (0..folds)
                .filter(|&f| f != fold)
                .flat_map(|f| test_sets[f].iter().copied())
                .collect();
            train.sort_unstable();
            out.push((train, test));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn table(n: usize, positives: &[usize]) -> LabeledTable {
        let data = Matrix::from_rows(&(0..n).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        let mut labels = vec![0u8; n];
        for &p in positives {
            labels[p] = 1;
        }
        LabeledTable::new(vec!["x".into()], data, labels).unwrap()
    }

    #[test]
    fn exact_divisibility_gives_two_positives_per_fold() {
        let t = table(50, &[0, 5, 10, 15, 20, 25, 30, 35, 40, 45]);
        let pairs = stratified_kfold(&t, 5, 1, 9).unwrap();
        assert_eq!(pairs.len(), 5);
        for (_, test) in &pairs {
            let pos = test.iter().filter(|&&i| t.label(i) == 1).count();
            assert_eq!(pos, 2);
        }
    }

    #[test]
    fn test_folds_partition_rows() {
        let t = table(43, &[1, 7, 13, 21, 29, 41]);
        let pairs = stratified_kfold(&t, 5, 1, 3).unwrap();
        let mut seen = vec![0usize; 43];
        for (train, test) in &pairs {
            for &i in test {
                seen[i] += 1;
            }
            assert_eq!(train.len() + test.len(), 43);
            let mut overlap = train.iter().filter(|i| test.contains(i));
            assert!(overlap.next().is_none());
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn repeats_multiply_pairs_and_differ() {
        let t = table(40, &[0, 4, 8, 12, 16, 20, 24, 28, 32, 36]);
        let pairs = stratified_kfold(&t, 5, 3, 11).unwrap();
        assert_eq!(pairs.len(), 15);
        // each repeat partitions all rows
        for r in 0..3 {
            let mut seen = vec![0usize; 40];
            for (_, test) in &pairs[r * 5..(r + 1) * 5] {
                for &i in test {
                    seen[i] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1), "repeat {r} not a partition");
        }
        assert_ne!(pairs[0].1, pairs[5].1, "repeats should reshuffle");
    }

    #[test]
    fn too_few_minority_rows_rejected() {
        let t = table(20, &[3]);
        assert!(stratified_kfold(&t, 5, 1, 0).is_err());
    }
}
