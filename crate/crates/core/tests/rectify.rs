//! End-to-end rectification scenarios on synthetic data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsom::harness::{synthesize, BlobSpec, SynthSpec};
use rsom::rectifier::epoch_win_counts;
use rsom::som::train_with;
use rsom::{rectify, Dataset, RsomConfig, SomConfig};

/// Two blobs of 200 plus 40 uniform points kept at least 3 units from both.
fn blobs_and_far_outliers(seed: u64) -> (Dataset, Vec<bool>) {
    let blobs = synthesize(&SynthSpec {
        blobs: vec![
            BlobSpec { mean: vec![0.0, 0.0], stddev: 0.3, count: 200 },
            BlobSpec { mean: vec![6.0, 6.0], stddev: 0.3, count: 200 },
        ],
        outliers: None,
        seed,
    })
    .unwrap();
    let mut rows: Vec<Vec<f64>> = blobs.rows().map(<[f64]>::to_vec).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    while rows.len() < 440 {
        let p = vec![rng.random_range(-8.0..14.0), rng.random_range(-8.0..14.0)];
        let far = [[0.0, 0.0], [6.0, 6.0]]
            .iter()
            .all(|m: &[f64; 2]| ((p[0] - m[0]).powi(2) + (p[1] - m[1]).powi(2)).sqrt() > 3.0);
        if far {
            rows.push(p);
        }
    }
    let truth = (0..440).map(|i| i >= 400).collect();
    (Dataset::new(rows).unwrap(), truth)
}

fn two_blob_config(seed: u64) -> RsomConfig {
    RsomConfig {
        theta: 0.3,
        ..RsomConfig::new(SomConfig {
            sigma_start: 1.0,
            sigma_end: 0.1,
            seed,
            ..SomConfig::new(3, 3)
        })
    }
}

#[test]
fn blobs_survive_and_far_outliers_are_discarded() {
    // Nine units for two blobs: a blob occasionally splits and leaves a
    // sliver in a low-excitation unit, so the blob check allows 2 of 20 seeds.
    let mut clean_seeds = 0;
    for seed in 0..20 {
        let (ds, is_outlier) = blobs_and_far_outliers(seed);
        let r = rectify(&ds, &two_blob_config(seed)).unwrap();
        if (0..400).all(|i| r.salient_units.contains(&r.assignment[i])) {
            clean_seeds += 1;
        }
        let caught = r.discarded().iter().filter(|&&i| is_outlier[i]).count();
        assert!(caught as f64 >= 0.7 * 40.0, "seed {seed}: caught {caught} of 40");
    }
    assert!(clean_seeds >= 18, "all blob instances salient in only {clean_seeds} of 20 seeds");
}

#[test]
fn duplicated_dataset_keeps_the_unit_split() {
    for seed in 0..5 {
        let (ds, _) = blobs_and_far_outliers(seed);
        let doubled: Vec<f64> = ds.as_flat().iter().chain(ds.as_flat()).copied().collect();
        let doubled = Dataset::from_flat(doubled, 2).unwrap();
        let cfg = two_blob_config(seed);
        let a = rectify(&ds, &cfg).unwrap();
        let b = rectify(&doubled, &cfg).unwrap();
        // The doubled run follows a different trajectory and may settle in a
        // mirrored layout, so compare what the split does to instances. The
        // exact scaling of the scores is checked on the ledger directly.
        let m = ds.len();
        let salient_a: Vec<bool> = (0..m).map(|i| a.salient_units.contains(&a.assignment[i])).collect();
        for copy in 0..2 {
            let salient_b: Vec<bool> = (0..m)
                .map(|i| b.salient_units.contains(&b.assignment[copy * m + i]))
                .collect();
            assert_eq!(salient_a[..400], salient_b[..400], "seed {seed} copy {copy}");
            let agree = salient_a.iter().zip(&salient_b).filter(|(x, y)| x == y).count();
            assert!(agree as f64 >= 0.98 * m as f64, "seed {seed}: {agree} of {m} agree");
        }
    }
}

#[test]
fn win_counts_match_the_trace() {
    let (ds, _) = blobs_and_far_outliers(1);
    let cfg = SomConfig { seed: 3, ..SomConfig::new(2, 2) };
    let mut recounted = Vec::new();
    let (_, trace) = train_with(&ds, &cfg, |_, epoch| {
        recounted.push(epoch_win_counts(&epoch.winners, 4).unwrap());
    })
    .unwrap();
    for (epoch, z) in trace.epochs.iter().zip(&recounted) {
        let mut manual = vec![0; 4];
        epoch.winners.iter().for_each(|&w| manual[w] += 1);
        assert_eq!(&manual, z);
        assert_eq!(z.iter().sum::<usize>(), ds.len());
    }
}

#[test]
fn isolated_silent_unit_is_an_outlier() {
    // One tight cluster and a 1x8 strip: far units never win and the window
    // is negligible at their grid distance by the last epochs.
    let rows: Vec<Vec<f64>> = (0..50).map(|i| vec![(i as f64 * 0.1).sin() * 0.01]).collect();
    let mut ds_rows = rows;
    ds_rows.push(vec![100.0]);
    let ds = Dataset::new(ds_rows).unwrap();
    let cfg = RsomConfig {
        theta: 0.01,
        ..RsomConfig::new(SomConfig {
            sigma_start: 0.3,
            sigma_end: 0.1,
            seed: 2,
            ..SomConfig::new(1, 8)
        })
    };
    let r = rectify(&ds, &cfg).unwrap();
    let winners: std::collections::BTreeSet<usize> = r.assignment.iter().copied().collect();
    assert!(r.outlier_units.iter().any(|u| !winners.contains(u)));
    assert!(r.salient_units.contains(&r.assignment[0]));
}

