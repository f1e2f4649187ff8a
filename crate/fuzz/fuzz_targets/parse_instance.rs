#![no_main]

use libfuzzer_sys::fuzz_target;
use multicover::geometry;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = geometry::parse_instance(text) {
        let body = geometry::ConvexBody::new(file.k.clone()).expect("parse checked the body");
        // Building runs the packing; keep the grids small.
        let coarse =
            file.a / body.inradius() <= 8.0 && file.grid_h.is_some_and(|h| file.a / h <= 80.0);
        if coarse {
            let _ = geometry::GeometricInstance::build(&file);
        }
    }
});
