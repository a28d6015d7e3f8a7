mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ripple_mesh::attention::export::{dense_bytes, plan_bytes, read_mask_file, supports_bytes, MaskFile};
use ripple_mesh::attention::{
    compress, frontier_mask, nsca_plan, nsca_reference, reference_attention, snapshots, window_masks, Gate, Matrix,
    NscaParams,
};
use ripple_mesh::corpus;
use ripple_mesh::tokenizer::FrontierSnapshot;
use ripple_mesh::{prepare, tokenize, ControlVocab, HalfEdgeStructure};

#[test]
fn row_supports_equal_queue_simulation() {
    for (name, raw) in corpus::procedural_corpus() {
        let (mesh, _) = prepare(&raw, 256).unwrap();
        let seq = tokenize(&HalfEdgeStructure::build(&mesh), &ControlVocab::new(256).unwrap());
        let sim = common::queue_simulation(&mesh);
        let mask = frontier_mask(&snapshots(&seq), 0..seq.face_count());
        assert_eq!(mask.clipped_entries(), 0);
        for (i, s) in sim.iter().enumerate() {
            let mut want = s.queue.clone();
            want.push(i);
            let got: Vec<usize> = mask.row_support_absolute(i).collect();
            assert_eq!(got, want, "{name} row {i}");
            if let Some(r) = s.root {
                assert!(mask.is_attendable(i, r));
            }
        }
    }
}

#[test]
fn frontier_row_is_its_queue() {
    let snap = |head, face| FrontierSnapshot { head, face };
    let snaps = [snap(0, 0), snap(0, 1), snap(0, 2), snap(1, 3), snap(1, 4), snap(2, 5)];
    let dense = frontier_mask(&snaps, 0..6).to_dense();
    let row: Vec<bool> = (0..6).map(|c| dense[(5, c)] == 0.0).collect();
    assert_eq!(row, [false, false, true, true, true, true]);
    // seed row: self only
    let seed: Vec<bool> = (0..6).map(|c| dense[(0, c)] == 0.0).collect();
    assert_eq!(seed, [true, false, false, false, false, false]);
    assert!((0..6).all(|c| dense[(1, c)] == 0.0 || dense[(1, c)] == f64::NEG_INFINITY));
}

#[test]
fn windows_clip_only_across_their_start() {
    let raw = corpus::torus(50, 25, 1.0, 0.3);
    let (mesh, _) = prepare(&raw, 256).unwrap();
    let seq = tokenize(&HalfEdgeStructure::build(&mesh), &ControlVocab::new(256).unwrap());
    let masks = window_masks(&seq, 1000);
    assert_eq!(masks.len(), 3);
    assert_eq!(masks[0].clipped_entries(), 0);
    for m in &masks {
        let w = m.window();
        let expected: usize = w
            .clone()
            .map(|i| w.start.saturating_sub(seq.frontier(i).head as usize))
            .sum();
        assert_eq!(m.clipped_entries(), expected);
    }
}

#[test]
fn block_validity_matches_brute_force() {
    for n in [100, 1000, 5000] {
        let layout = nsca_plan(n, NscaParams::default()).unwrap();
        for t in 0..n {
            for (b, block) in layout.blocks().enumerate() {
                let brute = block.clone().all(|p| p <= t);
                assert_eq!(layout.is_block_valid(b, t), brute, "n={n} t={t} b={b}");
            }
            let w = layout.local_window(t);
            assert!(w.end <= t && w.len() <= 32);
        }
    }
}

#[test]
fn plan_examples_for_130_faces() {
    let layout = nsca_plan(130, NscaParams::default()).unwrap();
    assert_eq!(layout.blocks().collect::<Vec<_>>(), vec![0..64, 64..128, 128..130]);
    assert_eq!(layout.block_mask(70), vec![0.0, f64::NEG_INFINITY, f64::NEG_INFINITY]);
    // block 1 ends at 127 itself, so nothing in it lies after the step
    assert_eq!(layout.valid_block_count(127), 2);
    assert_eq!(layout.valid_block_count(129), 3);
}

fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::random(rows, cols, rng)
}

#[test]
fn nsca_is_causal_under_future_perturbation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 300;
    let d = 8;
    let layout = nsca_plan(n, NscaParams::default()).unwrap();
    let gate = Gate::new([0.5, 0.3, 0.2]).unwrap();
    for _ in 0..10 {
        let keys = random(n, d, &mut rng);
        let values = random(n, d, &mut rng);
        let queries = random(n, d, &mut rng);
        let base = nsca_reference(&keys, &values, &queries, 0..n, &layout, gate).unwrap();
        for _ in 0..5 {
            let t = rng.random_range(0..n - 1);
            let mut k2 = keys.clone();
            let mut v2 = values.clone();
            for r in t + 1..n {
                k2.row_mut(r).iter_mut().for_each(|x| *x = rng.random_range(-5.0..5.0));
                v2.row_mut(r).iter_mut().for_each(|x| *x = rng.random_range(-5.0..5.0));
            }
            let again = nsca_reference(&k2, &v2, &queries.select_rows([t]), t..t + 1, &layout, gate).unwrap();
            assert_eq!(again.output.row(0), base.output.row(t));
        }
    }
}

#[test]
fn gate_degenerates_to_one_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 200;
    let layout = nsca_plan(n, NscaParams::default()).unwrap();
    let (k, v, q) = (random(n, 4, &mut rng), random(n, 4, &mut rng), random(n, 4, &mut rng));
    let out = nsca_reference(&k, &v, &q, 0..n, &layout, Gate::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
    assert_eq!(out.output, out.compressed);
    // step 0 sees nothing
    assert!(out.output.row(0).iter().all(|&x| x == 0.0));

    // compressed branch equals attention over pooled blocks under the block mask
    let ck = compress(&layout, &k);
    let cv = compress(&layout, &v);
    for t in [63, 64, 150, 199] {
        let mask = Matrix::from_vec(1, layout.block_count(), layout.block_mask(t));
        let want = reference_attention(&q.select_rows([t]), &ck, &cv, &mask).unwrap();
        for (a, b) in want.row(0).iter().zip(out.compressed.row(t)) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}

#[test]
fn selection_respects_top_k_and_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 5000;
    let layout = nsca_plan(n, NscaParams::default()).unwrap();
    for _ in 0..200 {
        let t = rng.random_range(0..n);
        let scores: Vec<f64> = (0..layout.block_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let chosen = layout.select_blocks(t, &scores);
        assert!(chosen.len() <= 16);
        assert_eq!(chosen.len(), layout.valid_block_count(t).min(16));
        assert!(chosen.iter().all(|&b| layout.is_block_valid(b as usize, t)));
        assert!(chosen.windows(2).all(|w| w[0] < w[1]));
    }
    // ties go to the lower block id
    let flat = vec![0.5; layout.block_count()];
    assert_eq!(layout.select_blocks(n - 1, &flat), (0..16).collect::<Vec<u32>>());
}

#[test]
fn sidecar_files_roundtrip() {
    let (mesh, _) = prepare(&corpus::icosphere(2), 256).unwrap();
    let seq = tokenize(&HalfEdgeStructure::build(&mesh), &ControlVocab::new(256).unwrap());
    let mask = frontier_mask(&snapshots(&seq), 100..300);
    match read_mask_file(&dense_bytes(&mask)).unwrap() {
        MaskFile::Dense { window_start, n, cells } => {
            assert_eq!((window_start, n), (100, 200));
            assert_eq!(cells, mask.to_i8());
        }
        other => panic!("{other:?}"),
    }
    match read_mask_file(&supports_bytes(&mask)).unwrap() {
        MaskFile::RowSupports { rows, .. } => {
            for (r, cols) in rows.iter().enumerate() {
                let want: Vec<u32> = mask.row_support(r).map(|c| c as u32).collect();
                assert_eq!(cols, &want);
            }
        }
        other => panic!("{other:?}"),
    }
    let layout = nsca_plan(seq.face_count(), NscaParams::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = seq.face_count();
    let out = nsca_reference(
        &random(n, 4, &mut rng),
        &random(n, 4, &mut rng),
        &random(n, 4, &mut rng),
        0..n,
        &layout,
        Gate::default(),
    )
    .unwrap();
    match read_mask_file(&plan_bytes(n, layout.params(), &out.steps)).unwrap() {
        MaskFile::Plan { seq_len, params, steps } => {
            assert_eq!(seq_len as usize, n);
            assert_eq!(params, NscaParams::default());
            assert_eq!(steps, out.steps);
        }
        other => panic!("{other:?}"),
    }
    assert!(read_mask_file(b"RIPL\x01\x00\x01").is_err());
}
