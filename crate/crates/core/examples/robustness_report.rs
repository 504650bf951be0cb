//! CE, RR and category rollups for a published row against the bundled baseline.

use mderobust::corruptions::{Category, Profile};
use mderobust::harness::{build_report, read_wide_table, shipped_baseline};

const DEE_TABLE: &str = include_str!("../data/fixtures/kitti_c_dee.csv");

pub fn run_example() {
    let table = read_wide_table(DEE_TABLE.as_bytes()).unwrap();
    let baseline = shipped_baseline(Profile::Outdoor5);
    for model in ["MonoDepth2-R18", "MonoViT", "Lite-Mono-Tiny"] {
        let Some(row) = table.row(model) else { continue };
        let doc = build_report(&row.cells(5), row.lead, &baseline, Some(Profile::Outdoor5)).unwrap();
        let p = &doc.presentation;
        print!("{model:<16} mCE {:>6.1} mRR {:>6.1} mDEE {:.3}", p.mce, p.mrr, p.mdee);
        for c in Category::ALL {
            let s = doc.report.category(c).unwrap();
            print!("  {} {:.1}", c.name(), s.mce);
        }
        println!();
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
