# steady package: stationary profiles and k_p steady states
