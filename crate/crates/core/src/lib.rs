pub mod cli;
pub mod corpus;
pub mod cyclo;
pub mod dataset;
pub mod lefschetz;
pub mod oracle;
pub mod report;
pub mod repring;

/// Trial-division primality test for the small group orders used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
pub mod rigidity;
pub mod selftest;
