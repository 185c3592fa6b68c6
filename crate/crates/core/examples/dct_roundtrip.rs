//! Forward and inverse block DCT on a single 8x8 block.

use dc_recovery::blockdct::BlockDct;

fn main() {
    let dct = BlockDct::new(8);
    let block: Vec<f64> = (0..64).map(|i| ((i * 37) % 256) as f64).collect();
    let coeffs = dct.forward(&block);
    let back = dct.inverse(&coeffs);

    let mean = block.iter().sum::<f64>() / 64.0;
    let err = block.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let energy = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();

    println!("DC coefficient   {:.6}", coeffs[0]);
    println!("8 * block mean   {:.6}", 8.0 * mean);
    println!("round-trip error {err:.3e}");
    println!("pixel energy     {:.3}", energy(&block));
    println!("coeff energy     {:.3}", energy(&coeffs));
    println!("first row of coefficients:");
    for c in &coeffs[..8] {
        print!("{c:9.2}");
    }
    println!();
}
