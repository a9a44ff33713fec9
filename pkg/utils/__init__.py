# utils package – brute-force oracle and CLI argument checks
