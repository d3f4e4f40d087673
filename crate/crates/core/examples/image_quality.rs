//! MS-SSIM of the bundled test card against noisy and bit-plane-truncated
//! copies of itself.

use rand::Rng;
use rand_distr::StandardNormal;
use uepsim::approx::{ms_ssim, GrayImage};
use uepsim::rng::substream;

fn main() -> uepsim::Result<()> {
    let card = uepsim::cli::default_asset();
    println!("identical: {:.6}", ms_ssim(&card, &card)?);
    let mut rng = substream(1, &[]);
    for sigma in [5.0, 15.0, 40.0] {
        let noisy = GrayImage::from_fn(card.width(), card.height(), |x, y| {
            let n: f64 = rng.sample(StandardNormal);
            (card.get(x, y) as f64 + sigma * n).round().clamp(0.0, 255.0) as u8
        });
        println!("gaussian noise sigma {sigma:>4}: {:.4}", ms_ssim(&card, &noisy)?);
    }
    for keep in [6u32, 4, 2, 1] {
        let mask = !((1u8 << (8 - keep)) - 1);
        let cut = GrayImage::from_fn(card.width(), card.height(), |x, y| card.get(x, y) & mask);
        println!("top {keep} bit-planes kept:   {:.4}", ms_ssim(&card, &cut)?);
    }
    Ok(())
}
