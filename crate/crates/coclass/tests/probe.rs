// scratch measurements, not part of the suite
use coclass::artin;
use coclass::catalog;
use coclass::pcgroup::PcGroup;
use coclass::pcover;
use std::time::Instant;

const BUDGET: u64 = 500_000_000;

fn mainline_child(g: &PcGroup) -> PcGroup {
    let kids = pcover::descendants(g, 1, BUDGET).unwrap();
    eprintln!("    fan size {}", kids.len());
    for k in &kids {
        if artin::is_admissible(k, 0, artin::TreeVariant::Eight).unwrap() {
            return k.clone();
        }
    }
    panic!("no admissible child");
}

#[test]
#[ignore]
fn probe_scaling() {
    let mut g = catalog::smallgroup_243_8();
    for lo in 6..=10u32 {
        let t = Instant::now();
        let next = mainline_child(&g);
        eprintln!("descendants 3^{} -> 3^{}: {} ms", lo - 1, lo, t.elapsed().as_millis());
        g = next;
        assert_eq!(g.order_exp(), lo);
    }
}
