use sublo::corpus::lattices_up_to;
use sublo::membership::{brute_force_oracle, decide_sub_lo, verify_certificate, Membership};

#[test]
fn decision_agrees_with_oracle_up_to_eight() {
    let mut members = 0;
    let mut total = 0;
    for l in lattices_up_to(8).unwrap() {
        let decided = decide_sub_lo(&l).unwrap();
        assert_eq!(decided.accepted(), brute_force_oracle(&l).unwrap(), "{:?}", l.to_json());
        if let Membership::Accepted(cert) = &decided {
            verify_certificate(&l, cert).unwrap();
            members += 1;
        }
        total += 1;
    }
    assert_eq!(total, 1 + 1 + 1 + 2 + 5 + 15 + 53 + 222);
    eprintln!("{members} of {total} lattices are members");
}
