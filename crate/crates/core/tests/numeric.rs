use multiwinner::{Error, Rational};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

proptest! {
    #[test]
    fn field_laws(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Rational::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * a.recip().unwrap(), Rational::one());
        }
    }

    #[test]
    fn text_round_trip(a in rat()) {
        let back: Rational = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn json_round_trip(a in rat()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: Rational = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn truncation_to_cents(a in rat()) {
        if a.is_negative() {
            prop_assert!(matches!(a.truncate_2dec(), Err(Error::Domain(_))));
        } else {
            let t = a.truncate_2dec().unwrap();
            prop_assert!(t <= a);
            prop_assert!(&a - &t < Rational::new(1, 100).unwrap());
            prop_assert!((&t * Rational::from(100u64)).is_integer());
            prop_assert_eq!(t.truncate_2dec().unwrap(), t.clone());
        }
    }
}

#[test]
fn exact_values() {
    let x: Rational = "192044/327".parse().unwrap();
    assert_eq!(x, Rational::new(384088, 654).unwrap());
    assert_eq!(x.approx(), "587.3");
    let d: Rational = "0.519".parse().unwrap();
    assert_eq!(d, Rational::new(519, 1000).unwrap());
    assert_eq!(Rational::new(2, 3).unwrap().truncate_2dec().unwrap(), Rational::new(66, 100).unwrap());
    assert!(Rational::new(1, 0).is_err());
    assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"num":192044,"den":327}"#);
}
