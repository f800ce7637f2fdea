# limit_solver package: heterogeneous scalar limit laws
