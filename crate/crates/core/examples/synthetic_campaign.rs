//! Regenerates `fixtures/synthetic_campaign.csv` on stdout.

use rma_core::campaign::{synthetic_campaign, write_campaign_csv, SYNTHETIC_CAMPAIGN_SEED};

fn main() {
    let records = synthetic_campaign(SYNTHETIC_CAMPAIGN_SEED);
    write_campaign_csv(std::io::stdout().lock(), &records).expect("write to stdout");
}
