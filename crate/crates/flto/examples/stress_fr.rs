// quick out-of-tree stress: more seeds, larger n
use flto::fr::{decomp, steiner_equivalent};
use flto::graph::{generate_graph, GenModel};

fn main() {
    let mut rng_state = 0x12345u64;
    let mut next = move || {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        rng_state
    };
    for trial in 0..400u64 {
        let n = 8 + (next() % 120) as usize;
        let maxm = n * (n - 1) / 2;
        let m = (next() as usize % (4 * n)).min(maxm);
        let model = match next() % 4 {
            0 => GenModel::Gnm { n, m },
            1 => GenModel::Grid { rows: 2 + (next() % 8) as usize, cols: 2 + (next() % 8) as usize },
            2 => GenModel::CliqueChain { cliques: 1 + (next() % 5) as usize, size: 3 + (next() % 5) as usize },
            _ => GenModel::Gnm { n, m: (n - 1).min(maxm) },
        };
        let g = generate_graph(model, trial).unwrap();
        let nn = g.vertex_count();
        for &s in &[3usize, 4, 5] {
            let all: Vec<u32> = (0..nn as u32).collect();
            let subset: Vec<u32> = all.iter().copied().filter(|_| next() % 3 == 0).collect();
            for u in [&all, &subset] {
                if u.len() < 2 { continue; }
                let r = decomp(&g, u, s).unwrap();
                for v in r.forest.vertices() {
                    if !r.bad.contains(&v) {
                        assert!(r.forest.degree(v) <= s, "trial {trial} s={s}");
                    }
                }
                assert!(r.bad.len() * (s - 2) < u.len(), "trial {trial} card");
                assert!(steiner_equivalent(&g, &r.forest, u, &r.bad), "trial {trial} equiv");
                assert!(steiner_equivalent(&g, &r.forest, u, &[]), "trial {trial} equiv0");
            }
        }
    }
    println!("stress ok");
}
