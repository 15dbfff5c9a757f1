use skewdim::extension::Projection;
use skewdim::freegroup::GroupElement;
use skewdim::poincare::{exponent_estimate, EngineOptions, EstimateOptions};
use skewdim::symbolic::{PotentialSpec, SftSystem};
use std::time::Instant;

fn main() {
    let system = SftSystem::full_shift(
        vec!["a".into(), "A".into(), "b".into(), "B".into()],
        PotentialSpec::constant(4, 1.0),
    )
    .unwrap();
    let chi = Projection::new(
        2,
        vec![
            GroupElement::parse("e1").unwrap(),
            GroupElement::parse("E1").unwrap(),
            GroupElement::parse("e2").unwrap(),
            GroupElement::parse("E2").unwrap(),
        ],
    )
    .unwrap();
    for g in ["", "e1", "e1 e2"] {
        let t = Instant::now();
        let target = GroupElement::parse(g).unwrap();
        let est = exponent_estimate(
            &system, &chi, &target, 24, None,
            &EngineOptions::default(), &EstimateOptions::default(),
        )
        .unwrap();
        println!(
            "g={g:8} delta={:.6} ci={:.6} lattice={} window={:?} elapsed={:?}",
            est.value, est.ci_width, est.lattice, est.window, t.elapsed()
        );
    }
    println!("target log(2*sqrt(3)) = {:.6}", (2.0 * 3f64.sqrt()).ln());
}
