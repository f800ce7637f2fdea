# policy package: check thresholds and reason-coded verdicts
