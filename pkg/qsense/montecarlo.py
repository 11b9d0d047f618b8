"""
Monte Carlo check of the distinguishability criterion: each replicate measures the output state N
times in the input basis, counts the failures and applies the signal-to-noise test against the
deterministic reference.

Uniforms come from a counter-based generator (Philox) keyed by the seed, one counter range per
block of replicates, so blocks can be evaluated in any order or in worker processes and still give
identical counts.
"""
from collections import namedtuple
from multiprocessing import Queue
import queue
import logging

import numpy as np
from scipy.stats import binom

from qsense.config import CONFIG
from qsense.distinguishability import as_budget, critical_fidelity, detectable_outcomes, detection_probability
from qsense.errors import INFEASIBLE, WorkerError
from qsense.events.results import DetectionCount
from qsense.events.tasks import CountDetections
from qsense.monitoring import monitor_runtime
from qsense.workers import WorkerProcess, init_workers

logger = logging.getLogger("montecarlo")

SEED_LIMIT = 2 ** 64

# seconds between checks of the error queue while waiting for results
RESULT_POLL = 0.5


class McConfig(namedtuple("McConfig", ["true_fidelity", "n", "replicates", "seed"])):
    __slots__ = ()

    def __new__(cls, true_fidelity, n, replicates, seed):
        if not 0.0 <= true_fidelity <= 1.0:
            raise ValueError("fidelity must lie in [0, 1], got {}".format(true_fidelity))
        if int(replicates) != replicates or replicates < 1:
            raise ValueError("replicates must be a positive integer, got {}".format(replicates))
        if int(seed) != seed or not 0 <= seed < SEED_LIMIT:
            raise ValueError("seed must be an integer in [0, 2^64), got {}".format(seed))
        n = as_budget(n).n
        max_trials = CONFIG["montecarlo"]["max_trials"]
        if n > max_trials:
            raise ValueError("binomial inversion supports n <= {}, got {}".format(max_trials, n))
        return super().__new__(cls, float(true_fidelity), n, int(replicates), int(seed))


SweepRow = namedtuple("SweepRow", ["t", "fidelity", "detection_rate", "exact_rate"])

Sweep = namedtuple("Sweep", ["rows", "threshold_time", "threshold_rate", "n", "replicates", "seed"])


###################################################################################
#                              SAMPLING                                           #
###################################################################################


def block_uniforms(seed, block, size):
    """uniforms of one block: Philox keyed by the seed, block index in the second counter word"""
    counter = np.array([0, block, 0, 0], dtype=np.uint64)
    generator = np.random.Generator(np.random.Philox(key=seed, counter=counter))
    return generator.random(size)


def failure_cdf(true_fidelity, n):
    return binom.cdf(np.arange(n + 1), n, 1.0 - true_fidelity)


def draw_failures(uniforms, cdf):
    """Binomial draws by inversion of a tabulated CDF"""
    n = len(cdf) - 1
    return np.minimum(np.searchsorted(cdf, uniforms, side="right"), n)


def count_block(task, cdf=None, mask=None):
    if cdf is None:
        cdf = failure_cdf(task.true_fidelity, task.n)
    if mask is None:
        mask = detectable_outcomes(task.n)
    failures = draw_failures(block_uniforms(task.seed, task.block, task.size), cdf)
    return DetectionCount(task.block, int(np.count_nonzero(mask[failures])), task.size)


def block_tasks(cfg, block_size):
    tasks = []
    for block, start in enumerate(range(0, cfg.replicates, block_size)):
        size = min(block_size, cfg.replicates - start)
        tasks.append(CountDetections(cfg.true_fidelity, cfg.n, cfg.seed, block, size))
    return tasks


###################################################################################
#                              EXECUTION                                          #
###################################################################################


class ReplicateProcess(WorkerProcess):
    def __init__(self, task_queue, result_queue, error_queue):
        super(ReplicateProcess, self).__init__(task_queue, result_queue, error_queue)
        self.tables = {}

    def execute_task(self, task):
        if isinstance(task, CountDetections):
            key = (task.true_fidelity, task.n)
            if key not in self.tables:
                self.tables[key] = (failure_cdf(task.true_fidelity, task.n), detectable_outcomes(task.n))
            cdf, mask = self.tables[key]
            return count_block(task, cdf, mask)
        else:
            raise NotImplementedError()


def _count_serial(tasks):
    cdf = failure_cdf(tasks[0].true_fidelity, tasks[0].n)
    mask = detectable_outcomes(tasks[0].n)
    return [count_block(task, cdf, mask) for task in tasks]


def _count_parallel(tasks, processes):
    task_queue, result_queue, error_queue = Queue(), Queue(), Queue()

    with init_workers(ReplicateProcess, processes, task_queue, result_queue, error_queue):
        for task in tasks:
            task_queue.put(task)

        counts = []
        while len(counts) < len(tasks):
            if not error_queue.empty():
                raise WorkerError("replicate worker failed: {}".format(error_queue.get().message))
            try:
                counts.append(result_queue.get(timeout=RESULT_POLL))
            except queue.Empty:
                continue
    return counts


@monitor_runtime
def run_experiment(cfg, processes=None, block_size=None):
    settings = CONFIG["montecarlo"]
    processes = settings["processes"] if processes is None else processes
    block_size = settings["block_size"] if block_size is None else block_size
    if processes < 1 or block_size < 1:
        raise ValueError("need at least one process and a positive block size")

    tasks = block_tasks(cfg, block_size)
    if processes == 1 or len(tasks) == 1:
        counts = _count_serial(tasks)
    else:
        counts = _count_parallel(tasks, min(processes, len(tasks)))

    # integer sum, independent of the order results arrive in
    detections = sum(count.detections for count in counts)
    logger.debug("F={} n={}: {} of {} replicates flagged".format(cfg.true_fidelity, cfg.n, detections, cfg.replicates))
    return detections / cfg.replicates


@monitor_runtime
def sweep_time(fidelity_fn, t_grid, n, replicates, seed, processes=None):
    """
    Empirical and exact detection rates along a fidelity trajectory F(t). The same seed is used at
    every t. threshold_time is the first grid time whose exact rate reaches the rate at F0.
    """
    n = as_budget(n).n
    threshold_rate = detection_probability(critical_fidelity(n), n)

    rows = []
    threshold_time = INFEASIBLE
    for t in t_grid:
        f = min(1.0, max(0.0, fidelity_fn(t)))
        exact = detection_probability(f, n)
        empirical = run_experiment(McConfig(f, n, replicates, seed), processes=processes)
        rows.append(SweepRow(float(t), f, empirical, exact))
        if threshold_time is INFEASIBLE and exact >= threshold_rate:
            threshold_time = float(t)

    return Sweep(rows, threshold_time, threshold_rate, n, replicates, seed)
