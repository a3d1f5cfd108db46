use lawrence_core::braid::{generator_matrix, rep_context, CONVENTION};
use lawrence_core::combinatorics::enumerate_compositions;
use lawrence_core::ring::{from_json_terms, TermJson};
use serde::Deserialize;

#[derive(Deserialize)]
struct Golden {
    schema: u32,
    convention: String,
    cases: Vec<Case>,
}

#[derive(Deserialize)]
struct Case {
    n: u32,
    m: u32,
    compositions: Vec<Vec<u32>>,
    generators: Vec<Vec<Vec<Vec<TermJson>>>>,
}

fn load() -> Golden {
    serde_json::from_str(include_str!("golden/braid_generators.json")).expect("golden file parses")
}

#[test]
fn header_matches_convention() {
    let g = load();
    assert_eq!(g.schema, 1);
    assert_eq!(g.convention, CONVENTION);
    assert!(g.cases.len() >= 7);
}

fn ours(case: &Case) -> Vec<Vec<u32>> {
    enumerate_compositions((case.n - 1) as usize, case.m).unwrap().iter().map(|c| c.parts().to_vec()).collect()
}

// The golden file may list the basis in its own order; entries are matched by composition.
#[test]
fn same_basis() {
    for case in load().cases {
        let mut a = ours(&case);
        let mut b = case.compositions.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b, "n = {}, m = {}", case.n, case.m);
    }
}

#[test]
fn generator_matrices_match() {
    for case in load().cases {
        let ctx = rep_context(case.m).unwrap();
        let basis = ours(&case);
        let at = |c: &Vec<u32>| basis.iter().position(|b| b == c).unwrap();
        assert_eq!(case.generators.len() as u32, case.n - 1);
        for (i, rows) in case.generators.iter().enumerate() {
            let g = generator_matrix(case.n, i as u32 + 1, case.m).unwrap().matrix;
            assert_eq!(g.rows(), rows.len());
            for (r, row) in rows.iter().enumerate() {
                for (c, terms) in row.iter().enumerate() {
                    let want = from_json_terms(&ctx, terms).unwrap();
                    let (f, e) = (at(&case.compositions[r]), at(&case.compositions[c]));
                    assert_eq!(g.get(f, e), &want, "n = {}, m = {}, s{} entry {:?} {:?}", case.n, case.m, i + 1, case.compositions[r], case.compositions[c]);
                }
            }
        }
    }
}
