# Intent classification benchmark
