"""
Hardy Multiprocesing
"""

import pickle
from threading import Thread
from multiprocessing import Process, Queue

import numpy as np


def process_map(func, iterator, n_proc=4, maxsize=2):
    """
    Take an `iterator` of key, value pairs and apply `func` to all values using `n_proc` processes.

    Results come back as (key, result) pairs in completion order.
    """
    if n_proc == 0: return ((k, func(v)) for k, v in iterator)
    return iter(ProcessMap(func, iterator, n_proc, output_queue=Queue(maxsize)))


def seed_shards(seed, n):
    """
    `n` independent integer seeds derived from `seed`.
    """
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(child.generate_state(1)[0]) for child in children]


class MapFailure:
    """
    An exception raised by a task, carried back to the consumer.
    """
    def __init__(self, exc):
        try:
            pickle.dumps(exc)
        except Exception:
            exc = RuntimeError(repr(exc))
        self.exc = exc


class MapWorker(Process):
    """
    Process that reads items from an input_queue, applies a
    func to them and puts them on an output_queue.
    """
    def __init__(self, func, input_queue, output_queue):
        super().__init__()
        self.func = func
        self.input_queue = input_queue
        self.output_queue = output_queue

    def run(self):
        while True:
            item = self.input_queue.get()
            if item is StopIteration:
                break
            k, v = item
            try:
                self.output_queue.put((k, self.func(v)))
            except Exception as exc:
                self.output_queue.put((k, MapFailure(exc)))


class ProcessMap(Thread):

    def __init__(self, func, iterator, n_proc, output_queue=None):
        super().__init__(daemon=True)
        self.iterator = iterator
        self.work_queue = Queue(n_proc * 2)
        self.output_queue = output_queue or Queue()
        self.processes = [
            MapWorker(func, self.work_queue, self.output_queue)
            for _ in range(n_proc)
        ]

    def start(self):
        for process in self.processes:
            process.start()
        super().start()

    def run(self):
        for k, v in self.iterator:
            self.work_queue.put((k, v))
        for _ in self.processes:
            self.work_queue.put(StopIteration)
        for process in self.processes:
            process.join()
        self.output_queue.put(StopIteration)

    def terminate(self):
        for process in self.processes:
            if process.is_alive():
                process.terminate()

    def __iter__(self):
        self.start()
        try:
            while True:
                item = self.output_queue.get()
                if item is StopIteration:
                    break
                k, result = item
                if isinstance(result, MapFailure):
                    raise result.exc
                yield item
        finally:
            self.terminate()
