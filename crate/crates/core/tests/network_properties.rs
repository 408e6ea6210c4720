mod common;

use common::{touchstone_roundtrip, z_reciprocity};
use num_complex::Complex64;
use proptest::prelude::*;
use siwkit::network::SParameterTrace;
use siwkit::qfactor::synthesize_trace;
use siwkit::touchstone::DataFormat;
use siwkit::units::linspace;

fn c(m: f64, a: f64) -> Complex64 {
    Complex64::from_polar(m, a)
}

proptest! {
    #[test]
    fn touchstone_roundtrip_all_formats(ql in 20.0f64..300.0, ratio in 1.1f64..50.0, n in 5usize..60) {
        let f0 = 21.165e9;
        let bw = f0 / ql;
        let trace = synthesize_trace(f0, ql, ql * ratio, &linspace(f0 - 3.0 * bw, f0 + 3.0 * bw, n)).unwrap();
        for format in [DataFormat::RI, DataFormat::MA, DataFormat::DB] {
            let r = touchstone_roundtrip(&trace, format);
            prop_assert!(r.is_ok(), "{:?}", r);
        }
    }

    #[test]
    fn touchstone_roundtrip_arbitrary(vals in prop::collection::vec((1e-4f64..1.0, -3.1f64..3.1), 8)) {
        let s: Vec<Complex64> = vals.iter().map(|&(m, a)| c(m, a)).collect();
        let trace = SParameterTrace::new(vec![1e9, 2.5e9], vec![s[0], s[1]], vec![s[2], s[3]], vec![s[4], s[5]], vec![s[6], s[7]], 50.0).unwrap();
        for format in [DataFormat::RI, DataFormat::MA, DataFormat::DB] {
            let r = touchstone_roundtrip(&trace, format);
            prop_assert!(r.is_ok(), "{:?}", r);
        }
    }

    #[test]
    fn reciprocal_s_gives_reciprocal_z(m in prop::array::uniform3(0.0f64..0.95), a in prop::array::uniform3(-3.1f64..3.1)) {
        let r = z_reciprocity(c(m[0], a[0]), c(m[1], a[1]), c(m[2], a[2]));
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}
