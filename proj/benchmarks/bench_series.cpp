// benchmarks added with the modules they exercise
