use anchor_recon::*;
use std::time::Instant;

fn main() {
    // canonical_key on random graphs at the orders the suite uses
    for n in [15, 16, 24, 32, 40] {
        let gs: Vec<Graph> = (0..20).map(|s| Graph::random(n, s)).collect();
        let t = Instant::now();
        for g in &gs { std::hint::black_box(iso::canonical_key(g)); }
        println!("canonical_key n={n}: {:?}/graph", t.elapsed() / 20);
    }
    // symmetric worst cases
    for n in [12, 16, 20] {
        let t = Instant::now();
        std::hint::black_box(iso::canonical_key(&Graph::complete(n)));
        println!("canonical_key K_{n}: {:?}", t.elapsed());
    }
    for n in [16, 20] {
        let t = Instant::now();
        std::hint::black_box(iso::canonical_key(&graph::constructions::complete_bipartite(n/2, n/2)));
        println!("canonical_key K_{{{},{}}}: {:?}", n/2, n/2, t.elapsed());
    }
    let t = Instant::now();
    let classes = iso::enumerate_classes(7).unwrap();
    println!("enumerate_classes(7) = {} in {:?}", classes.len(), t.elapsed());

    let t = Instant::now();
    let r = experiments::roundtrip_experiment(32, 10, 64, 5).unwrap();
    println!("roundtrip n=32 x10: found {} in {:?}", r.anchors_found, t.elapsed());

    let t = Instant::now();
    let est = experiments::estimate_stable_anchor_prob(40, 16, 50, 3);
    println!("estimate n=40 m=16 x50: stable {} in {:?}", est.stable_fraction(), t.elapsed());

    let g = Graph::random(40, 17);
    let t = Instant::now();
    let d = recon::sampled_deck(&g, 16, 2000, 23);
    println!("sampled_deck n=40 m=16 x2000: {} keys in {:?}", d.distinct_keys(), t.elapsed());
}
