mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use sandpile::graph::{BaseGraph, GraphFile};
use sandpile::linalg::det;
use sandpile::SinkedMultigraph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laplacian_rows_count_sink_edges(seed in any::<u64>(), directed in any::<bool>()) {
        let mut rng = rng(seed);
        let g = random_graph(&mut rng, 8, 3, directed);
        let lap = g.reduced_laplacian();
        for (i, label) in g.non_sink_labels().into_iter().enumerate() {
            let row: BigInt = lap.row(i).iter().sum();
            prop_assert_eq!(row, BigInt::from(g.multiplicity(label, g.sink())));
        }
        prop_assert!(det(&lap).unwrap() >= BigInt::one());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), directed in any::<bool>()) {
        let mut rng = rng(seed);
        let g = random_graph(&mut rng, 8, 3, directed);
        let text = g.to_json();
        let back = SinkedMultigraph::from_json(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_json(), text.clone());
        prop_assert_eq!(GraphFile::parse(&text).unwrap().to_json(), text);
    }

    #[test]
    fn relabeling_permutes_the_laplacian(seed in any::<u64>(), directed in any::<bool>()) {
        let mut rng = rng(seed);
        let g = random_graph(&mut rng, 8, 3, directed);
        let mut order: Vec<&str> = g.vertices().iter().map(String::as_str).collect();
        order.shuffle(&mut rng);
        let h = g.reordered(&order).unwrap();
        let (lg, lh) = (g.reduced_laplacian(), h.reduced_laplacian());
        let labels_g = g.non_sink_labels();
        let labels_h = h.non_sink_labels();
        let pos = |l: &str| labels_g.iter().position(|&x| x == l).unwrap();
        for (i, a) in labels_h.iter().enumerate() {
            for (j, b) in labels_h.iter().enumerate() {
                prop_assert_eq!(&lh[(i, j)], &lg[(pos(a), pos(b))]);
            }
        }
        prop_assert_eq!(det(&lg).unwrap(), det(&lh).unwrap());
    }
}

#[test]
fn cones_over_regular_bases_fix_ones() {
    let mut bases = vec![BaseGraph::petersen()];
    for n in 3..=7 {
        bases.push(BaseGraph::cycle(n).unwrap());
    }
    for n in 2..=6 {
        bases.push(BaseGraph::complete(n).unwrap());
    }
    for base in bases {
        let cone = base.cone();
        let lap = cone.reduced_laplacian();
        for i in 0..lap.rows() {
            assert_eq!(lap.row(i).iter().sum::<BigInt>(), BigInt::one());
        }
        assert_eq!(cone.num_non_sink(), base.vertices().len());
    }
}
