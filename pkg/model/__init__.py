# model package: heterogeneity, grid, inversions
