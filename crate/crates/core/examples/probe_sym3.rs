use skewdim::extension::Projection;
use skewdim::freegroup::GroupElement;
use skewdim::poincare::{estimate_exponent, EstimateOptions};
use skewdim::schottky::orbit::{restricted_spectra, unrestricted_spectra, OrbitOptions};
use skewdim::schottky::{schottky_projection, SchottkyGroup};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let arc_deg: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(25.0);
    let n_g: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(12);
    let n_n: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(12);
    let group = SchottkyGroup::symmetric_by_arc(3, arc_deg.to_radians()).unwrap();
    let coding = group.coding().unwrap();
    let chi = schottky_projection(
        &group,
        2,
        vec![
            GroupElement::parse("e1").unwrap(),
            GroupElement::parse("e2").unwrap(),
            GroupElement::identity(),
            GroupElement::parse("E1").unwrap(),
            GroupElement::parse("E2").unwrap(),
            GroupElement::identity(),
        ],
    )
    .unwrap();
    let opts = OrbitOptions::default();
    let est = EstimateOptions::default();

    let t = Instant::now();
    let (orb, geo) = unrestricted_spectra(&coding, n_g, &opts).unwrap();
    let dg = estimate_exponent(&orb, None, &est).unwrap();
    let dg_geo = estimate_exponent(&geo, None, &est).unwrap();
    println!(
        "arc={arc_deg}  delta_G={:.5} ci={:.5} (geo {:.5} ci {:.5})  [n={} in {:?}]",
        dg.value, dg.ci_width, dg_geo.value, dg_geo.ci_width, n_g, t.elapsed()
    );

    let t = Instant::now();
    let rest = restricted_spectra(&group, &chi, &GroupElement::identity(), n_n, &opts).unwrap();
    let dn = estimate_exponent(&rest, None, &est).unwrap();
    println!(
        "          delta_N={:.5} ci={:.5}  [n={} in {:?}]",
        dn.value, dn.ci_width, n_n, t.elapsed()
    );
    println!(
        "          order: G/2={:.5} < N={:.5} < G={:.5}  margins: lo={:.5} hi={:.5} vs ci sum lo={:.5} hi={:.5}",
        dg.value / 2.0,
        dn.value,
        dg.value,
        dn.value - dg.value / 2.0,
        dg.value - dn.value,
        dn.ci_width + dg.ci_width / 2.0,
        dn.ci_width + dg.ci_width,
    );
}
