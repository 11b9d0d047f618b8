from multiprocessing import Process
from contextlib import contextmanager
from abc import abstractmethod
import logging

from qsense.events.tasks import Shutdown
from qsense.events.results import Error

logger = logging.getLogger("workers")


class WorkerProcess(Process):
    def __init__(self, task_queue, result_queue, error_queue):
        super(WorkerProcess, self).__init__(daemon=True)
        self.task_queue = task_queue
        self.result_queue = result_queue
        self.error_queue = error_queue

    @abstractmethod
    def execute_task(self, task):
        pass

    def run(self):
        try:
            while True:
                task = self.task_queue.get()
                if isinstance(task, Shutdown):
                    break

                result = self.execute_task(task)
                if result is not None:
                    self.result_queue.put(result)

        except Exception as e:
            self.error_queue.put(Error(repr(e)))
            raise e  # to throw stacktrace and stop this process


@contextmanager
def init_workers(worker_class, processes, task_queue, result_queue, error_queue):
    workers = [worker_class(task_queue, result_queue, error_queue) for _ in range(processes)]
    logger.debug("starting {} {} processes".format(processes, worker_class.__name__))

    try:
        for worker in workers:
            worker.start()
        yield workers
    finally:
        for worker in workers:
            if worker.is_alive():
                task_queue.put(Shutdown())
        for worker in workers:
            worker.join(timeout=5.0)
            if worker.is_alive():
                worker.terminate()
