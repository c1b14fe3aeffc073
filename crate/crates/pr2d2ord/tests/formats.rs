use pr2d2ord::formats::{read_draws_bin, read_draws_csv, write_draws_bin, write_draws_csv, FormatError};
use pr2d2ord_core::draws::{ChainDraws, ChainStats, PosteriorDraws};

fn stats() -> ChainStats {
    ChainStats {
        step_size: 0.3,
        mean_accept_stat: 0.8,
        divergences: 0,
        warmup_divergences: 2,
        max_depth_hits: 0,
        leapfrog_steps: 100,
        reinits: 0,
    }
}

fn sample_draws() -> PosteriorDraws {
    let (p, k, n) = (3, 4, 5);
    let width = 2 * p + k;
    let chains = (0..2)
        .map(|c| ChainDraws {
            values: (0..n * width).map(|i| (c * 1000 + i) as f64 * 0.1 - 3.7 + 1e-13).collect(),
            stats: stats(),
        })
        .collect();
    PosteriorDraws::new(p, k, "pr2d2ord", 42, 7, chains).unwrap()
}

fn same_values(a: &PosteriorDraws, b: &PosteriorDraws) {
    assert_eq!((a.p, a.k, a.num_chains(), a.draws_per_chain()), (b.p, b.k, b.num_chains(), b.draws_per_chain()));
    for c in 0..a.num_chains() {
        assert_eq!(a.chain_values(c), b.chain_values(c));
    }
}

#[test]
fn binary_round_trip_is_exact() {
    let d = sample_draws();
    let mut buf = Vec::new();
    write_draws_bin(&d, &mut buf).unwrap();
    assert_eq!(&buf[..4], b"PR2D");
    assert_eq!(buf.len(), 40 + "pr2d2ord".len() + 2 * 5 * 10 * 8);
    let back = read_draws_bin(buf.as_slice()).unwrap();
    same_values(&d, &back);
    assert_eq!((back.seed, back.warmup, back.prior.as_str()), (42, 7, "pr2d2ord"));
}

#[test]
fn text_round_trip_is_exact() {
    let d = sample_draws();
    let mut buf = Vec::new();
    write_draws_csv(&d, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("chain,draw,beta[1],beta[2],beta[3],phi[1],phi[2],phi[3],W,tau[1],tau[2],tau[3]\n"));
    same_values(&d, &read_draws_csv(buf.as_slice()).unwrap());
}

#[test]
fn corrupt_binary_rejected() {
    let d = sample_draws();
    let mut buf = Vec::new();
    write_draws_bin(&d, &mut buf).unwrap();
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(matches!(read_draws_bin(bad.as_slice()), Err(FormatError::Magic)));
    let mut bad = buf.clone();
    bad[4] = 9;
    assert!(matches!(read_draws_bin(bad.as_slice()), Err(FormatError::Version(9))));
    assert!(read_draws_bin(&buf[..buf.len() - 3]).is_err());
    let mut long = buf.clone();
    long.push(0);
    assert!(matches!(read_draws_bin(long.as_slice()), Err(FormatError::Malformed(_))));
}
