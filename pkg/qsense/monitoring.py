from functools import wraps
from collections import deque
import time
import logging

import numpy as np

AVERAGE_WINDOW = 10


def monitor_runtime(f):
    """
    Log the runtime of every call at DEBUG, plus a rolling average over the last AVERAGE_WINDOW calls
    """
    name = "{}.{}".format(f.__module__.split(".")[-1], f.__name__)
    logger = logging.getLogger(name)
    logger_avg = logging.getLogger(name + "_avg")
    history = deque(maxlen=AVERAGE_WINDOW)
    counter = 0

    @wraps(f)
    def decorated(*args, **kwargs):
        start = time.perf_counter()
        result = f(*args, **kwargs)
        runtime = time.perf_counter() - start

        history.append(runtime)
        logger.debug("runtime={}s".format(np.round(runtime, 4)))

        nonlocal counter
        counter = (counter + 1) % AVERAGE_WINDOW
        if len(history) == AVERAGE_WINDOW and counter == 0:
            logger_avg.debug("runtime={}s over {} calls".format(np.round(np.mean(history), 4), AVERAGE_WINDOW))

        return result
    return decorated
