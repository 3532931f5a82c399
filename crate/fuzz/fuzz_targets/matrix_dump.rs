#![no_main]

use itep_core::ComplexMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = ComplexMatrix::parse_dump(text) {
        let again = ComplexMatrix::parse_dump(&m.to_dump()).expect("dump of a parsed matrix must parse");
        assert_eq!((again.rows(), again.cols()), (m.rows(), m.cols()));
        for (a, b) in m.as_slice().iter().zip(again.as_slice()) {
            assert!(a == b || (a.re.is_nan() || a.im.is_nan()));
        }
    }
});
