#![no_main]

use libfuzzer_sys::fuzz_target;
use multicover::RationalLambda;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(lambda) = text.parse::<RationalLambda>() {
        assert!(lambda.numer() > 0 && lambda.numer() < lambda.denom());
        let shown = lambda.to_string();
        assert_eq!(
            shown
                .parse::<RationalLambda>()
                .expect("display form parses"),
            lambda
        );
    }
});
