#![no_main]

use itep_core::BoundaryMesh;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mesh) = BoundaryMesh::parse_text(text) {
        let again = BoundaryMesh::parse_text(&mesh.to_text()).expect("text of a parsed mesh must parse");
        assert_eq!(again.nodes(), mesh.nodes());
        assert!(mesh.lengths().iter().all(|l| *l > 0.0 && l.is_finite()));
    }
});
