use specsup::search::*;
use specsup::theorems;

fn main() {
    for (steps, t0, cooling, restarts, moves, seed) in [
        (200_000usize, 1.2f64, 0.99996f64, 8usize, MoveKind::SingleFlip, 1u64),
        (200_000, 1.2, 0.99996, 8, MoveKind::Swap, 1),
        (300_000, 2.0, 0.99997, 8, MoveKind::SingleFlip, 7),
    ] {
        let n = 40;
        let cfg = SearchConfig {
            n,
            objective: "maximize-lambda".into(),
            constraints: vec![Constraint { counter: CounterKind::Bowties, max: Some(20), exact: None }],
            moves,
            schedule: Schedule { t0, cooling, steps },
            seed,
            restarts,
            init: InitKind::Empty,
        };
        let start = std::time::Instant::now();
        let res = anneal(&cfg).unwrap();
        let thr = theorems::lambda_kplus2_ref(n);
        println!(
            "steps={steps} t0={t0} cool={cooling} moves={moves:?} seed={seed}: best={:.9} gap={:+.3e} family={:?} [{:?}]",
            res.best_lambda, res.best_lambda - thr, res.matched_family, start.elapsed()
        );
    }
}
