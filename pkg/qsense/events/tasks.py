class CountDetections:
    """
    Count the flagged replicates of one generator block. Carries everything the worker needs, so
    a worker never reads configuration of its own.
    """
    def __init__(self, true_fidelity, n, seed, block, size):
        self.true_fidelity = true_fidelity
        self.n = n
        self.seed = seed
        self.block = block
        self.size = size


class Shutdown:
    pass
