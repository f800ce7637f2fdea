# relax_solver package: 2x2 and 3x3 relaxation systems
