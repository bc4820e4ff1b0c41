#![no_main]

//! Bytes -> small integer matrix; checks the Smith and Hermite identities.

use cybundle::fga::{hermite_normal_form, smith_normal_form, IntMatrix};
use libfuzzer_sys::fuzz_target;
use num_bigint::BigInt;

fuzz_target!(|data: &[u8]| {
    let [shape, rest @ ..] = data else { return };
    let (r, c) = (usize::from(shape >> 4) % 8 + 1, usize::from(shape & 15) % 8 + 1);
    if rest.len() < r * c {
        return;
    }
    let a = IntMatrix::from_fn(r, c, |i, j| BigInt::from(rest[i * c + j] as i8));
    let s = smith_normal_form(&a);
    assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
    assert!(s.u.is_unimodular() && s.v.is_unimodular());
    let d = s.diagonal();
    for w in d.windows(2) {
        assert!(w[1] == BigInt::from(0) || (&w[1] % &w[0]) == BigInt::from(0));
    }
    let (h, u) = hermite_normal_form(&a);
    assert_eq!(u.mul(&a).unwrap(), h);
});
