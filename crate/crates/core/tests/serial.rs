use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stideal::conjecture::random_module_with;
use stideal::field::Field;
use stideal::module::Module;
use stideal::serial::{
    module_from_json, module_to_json, points_from_json, read_module, support_to_json, write_module, ModuleJson,
};
use stideal::sl2::{lambda_auto, TiltingTable};
use stideal::varieties::support_points;

fn f(p: u32, k: u32) -> Field {
    Field::new(p, k).unwrap()
}

#[test]
fn file_round_trip() {
    let t = TiltingTable::build(&lambda_auto(&f(3, 2), 2).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for i in 0..t.len() {
        let path = dir.path().join(format!("T_{i}.json"));
        write_module(&path, t.t(i)).unwrap();
        assert_eq!(&read_module(&path).unwrap(), t.t(i));
    }
    assert!(read_module(&dir.path().join("missing.json")).is_err());
}

#[test]
fn malformed_inputs_rejected() {
    let m = Module::trivial(&f(2, 2), 2);
    let good = ModuleJson::from_module(&m);
    assert_eq!(good.modulus, vec![1, 1, 1]);

    let mut bad = good.clone();
    bad.modulus = vec![1, 0, 1];
    assert!(bad.to_module().is_err());

    let mut bad = good.clone();
    bad.generators.pop();
    assert!(bad.to_module().is_err());

    let mut bad = good.clone();
    bad.dim = 2;
    assert!(bad.to_module().is_err());

    let mut bad = good.clone();
    bad.generators[0][0][0] = vec![1, 0];
    assert!(bad.to_module().is_err(), "N_1 = 1 is not nilpotent");

    let mut bad = good;
    bad.generators[0][0][0] = vec![5, 0];
    assert!(bad.to_module().is_err());

    assert!(module_from_json("{\"p\": 2}").is_err());
    assert!(module_from_json("not json").is_err());
}

#[test]
fn support_json() {
    let t = TiltingTable::build(&lambda_auto(&f(3, 2), 2).unwrap()).unwrap();
    let s = support_points(t.s(), 1).unwrap();
    let sj = support_to_json(&s);
    assert_eq!(sj.e, 1);
    assert_eq!(sj.points.len(), 1);
    let back = points_from_json(t.field(), &sj).unwrap();
    assert_eq!(back, vec![s.points[0].coords.clone()]);
    let text = serde_json::to_string(&sj).unwrap();
    assert_eq!(serde_json::from_str::<stideal::serial::SupportJson>(&text).unwrap(), sj);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip(seed in any::<u64>(), q in prop::sample::select(vec![(2u32, 1u32), (2, 2), (3, 2), (2, 3), (5, 1)])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fld = f(q.0, q.1);
        let r = rng.gen_range(1..=2);
        let m = random_module_with(&fld, r, rng.gen_range(1..=2), rng.gen_range(1..=3), &mut rng);
        let text = module_to_json(&m);
        prop_assert_eq!(module_from_json(&text).unwrap(), m);
    }
}
