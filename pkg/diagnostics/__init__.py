# diagnostics package: norms, residuals, reports
