# coding: utf-8
"""
Summary reports of training runs.
"""
import prettytable as pt

from monty.json import MSONable

from sparseia.aggregation.aggregates import Algorithm


def seconds_to_hms(seconds):
    """
    Converts second to the format "h:mm:ss"

    Args:
        seconds: number of seconds

    Returns:
        A string representing the seconds with the format "h:mm:ss". An empty string if seconds is None.
    """
    if seconds is None:
        return ""

    m, s = divmod(seconds, 60)
    h, m = divmod(m, 60)
    return "%d:%02d:%02d" % (h, m, s)


class RunReport(MSONable):
    """
    Report of one or more training runs with their final accuracy, transmitted data and wall time.
    Each entry is a dict with the keys algorithm, budget, rounds, final_accuracy, total_bits,
    mean_bits_per_round and run_time.
    """

    COLUMNS = ['algorithm', 'budget', 'rounds', 'final accuracy', 'total bits', 'bits/round', 'time (h:m:s)']

    def __init__(self, entries=None, title=None):
        self.entries = list(entries) if entries else []
        self.title = title

    def add_run(self, params, metrics, run_time=None):
        """Adds the summary of the run of params producing the list of RoundMetrics metrics."""
        total_bits = sum(m.total_bits for m in metrics)
        budget = "q_g={} q_l={}".format(params.q_g, params.q_l) if params.is_time_correlated else \
            "q={}".format(params.q)
        if params.algorithm == Algorithm.DENSE:
            budget = "dense"
        self.entries.append(dict(algorithm=params.algorithm, budget=budget, rounds=len(metrics),
                                 final_accuracy=metrics[-1].accuracy if metrics else None,
                                 total_bits=total_bits,
                                 mean_bits_per_round=total_bits / len(metrics) if metrics else 0.0,
                                 run_time=run_time))

    def as_dict(self):
        return {'@module': self.__class__.__module__,
                '@class': self.__class__.__name__,
                'entries': self.entries, 'title': self.title}

    @classmethod
    def from_dict(cls, d):
        return cls(entries=d['entries'], title=d.get('title'))

    def __str__(self):
        s = ''
        if self.title:
            s += '{}\n'.format(self.title)

        t = pt.PrettyTable(self.COLUMNS, float_format="5.4")
        t.align['algorithm'] = 'l'
        for e in self.entries:
            acc = '' if e['final_accuracy'] is None else '{:.4f}'.format(e['final_accuracy'])
            t.add_row([e['algorithm'], e['budget'], e['rounds'], acc, e['total_bits'],
                       '{:.1f}'.format(e['mean_bits_per_round']), seconds_to_hms(e['run_time'])])
        s += str(t)
        return s
