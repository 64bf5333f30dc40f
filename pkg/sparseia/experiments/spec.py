# coding: utf-8
"""
Configuration of the experiments.

The options have default values that can be overridden by a configuration file and by the command line.
A configuration file contains one "key = value" pair per line, lines starting with # are comments.
"""
import io
import logging
import os

from collections import namedtuple, OrderedDict

from sparseia.core.errors import ConfigError, ContractViolationError
from sparseia.aggregation.aggregates import Algorithm, AlgorithmParams
from sparseia.fl.training import TrainConfig


logger = logging.getLogger(__name__)


def _parse_bool(value):
    s = str(value).strip().lower()
    if s in ('1', 'true', 'yes', 'on'):
        return True
    if s in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError("invalid boolean {}".format(value))


def _parse_int_list(value):
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(v) for v in str(value).replace(' ', '').split(',') if v]


def _parse_optional_int(value):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return int(value)


def _parse_optional_float(value):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return float(value)


def _parse_optional_str(value):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return str(value).strip()


def _format_value(value):
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ','.join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ExperimentSpec(object):
    """
    Object containing the configuration of an experiment: the training parameters, the sweep ranges, the
    output directory and the parameters of the verification suites.
    The options are available as attributes of the namedtuple ExperimentSpec.options.
    """

    CONFIG_FILE = "sparseia.cfg"
    RESOLVED_FILE = "config.resolved"
    USER_CONFIG_DIR = os.path.join(os.path.expanduser("~"), ".sparseia")
    CONFIG_ENV = "SPARSEIA_CONFIG"
    MNIST_ENV = "SPARSEIA_MNIST_DIR"

    # (default value, parser)
    option_defaults = OrderedDict([
        ('alg', ('cl-sia', Algorithm.normalize)),
        ('k', (28, int)),
        ('q', (78, int)),
        ('q_g', (96, int)),
        ('q_l', (10, int)),
        ('rounds', (200, int)),
        ('batch', (20, int)),
        ('lr', (0.1, float)),
        ('local_steps', (1, int)),
        ('seed', (1, int)),
        ('omega', (32, int)),
        ('iid', (True, _parse_bool)),
        ('mnist_dir', (None, _parse_optional_str)),
        ('synthetic', (False, _parse_bool)),
        ('synthetic_train', (6000, int)),
        ('synthetic_test', (1000, int)),
        ('out', ('results', str)),
        ('trials', (100000, int)),
        ('d', (None, _parse_optional_int)),
        ('k_list', ([4, 8, 12, 16, 20, 24, 28], _parse_int_list)),
        ('q_list', ([78], _parse_int_list)),
        ('analytical', (False, _parse_bool)),
        ('workers', (1, int)),
        ('threshold', (0.88, float)),
        ('local_fraction', (0.1, float)),
        ('target_bits', (None, _parse_optional_float)),
    ])
    Options = namedtuple("Options", option_defaults.keys())

    def __init__(self, **kwargs):
        options = self._parse(kwargs)
        # options set by a file or by the command line, as opposed to defaults
        self.explicit_keys = set(options.keys())
        options = dict(((k, v[0]) for k, v in self.option_defaults.items()), **options)
        # make a namedtuple for easier access to the attributes
        self.options = self.Options(**options)
        self.validate()

    @classmethod
    def normalize_key(cls, key):
        return str(key).strip().lower().replace('-', '_')

    @classmethod
    def _parse(cls, d):
        d = {cls.normalize_key(k): v for k, v in d.items()}
        unknown_keys = set(d.keys()) - set(cls.option_defaults.keys())
        if unknown_keys:
            msg = "Unknown key(s) present in the configuration: {}".format(", ".join(sorted(unknown_keys)))
            logger.error(msg)
            raise ConfigError(msg)
        parsed = {}
        for key, value in d.items():
            parser = cls.option_defaults[key][1]
            try:
                parsed[key] = parser(value)
            except (ValueError, TypeError, ContractViolationError) as exc:
                msg = "Invalid value {!r} for option {}: {}".format(value, key, exc)
                logger.error(msg)
                raise ConfigError(msg)
        return parsed

    def validate(self):
        o = self.options
        problems = []
        for key in ('k', 'rounds', 'batch', 'local_steps', 'omega', 'trials', 'workers'):
            minimum = 0 if key == 'rounds' else 1
            if getattr(o, key) < minimum:
                problems.append("{} should be >= {}".format(key, minimum))
        for key in ('q', 'q_g', 'q_l', 'seed', 'synthetic_train', 'synthetic_test'):
            if getattr(o, key) < 0:
                problems.append("{} should be >= 0".format(key))
        if o.lr < 0:
            problems.append("lr should be >= 0")
        if not o.k_list or min(o.k_list) < 1:
            problems.append("k_list should be a non empty list of positive integers")
        if not o.q_list or min(o.q_list) < 0:
            problems.append("q_list should be a non empty list of non negative integers")
        if o.d is not None and o.d < 1:
            problems.append("d should be >= 1")
        if not 0 <= o.local_fraction <= 1:
            problems.append("local_fraction should be in [0, 1]")
        if problems:
            msg = "Invalid configuration: {}".format("; ".join(problems))
            logger.error(msg)
            raise ConfigError(msg)

    @classmethod
    def read_config_file(cls, path):
        """Reads a key = value configuration file into a dictionary of strings."""
        d = {}
        with io.open(path, "rt", encoding="utf-8") as fh:
            for i, line in enumerate(fh, start=1):
                line = line.split('#', 1)[0].strip()
                if not line:
                    continue
                if '=' not in line:
                    msg = "Cannot parse line {} of {}: expected key = value".format(i, path)
                    logger.error(msg)
                    raise ConfigError(msg)
                key, value = line.split('=', 1)
                d[cls.normalize_key(key)] = value.strip()
        return d

    @classmethod
    def from_file(cls, path, **overrides):
        """Reads the configuration from the file at path, the values in overrides take precedence."""
        if not os.path.isfile(path):
            msg = "Configuration file {} does not exist".format(path)
            logger.error(msg)
            raise ConfigError(msg)
        d = cls.read_config_file(path)
        d.update({cls.normalize_key(k): v for k, v in overrides.items()})
        return cls(**d)

    @classmethod
    def from_user_config(cls, config_path=None, **overrides):
        """
        Initialize the configuration using the first file found in the following order of preference:
        - the file passed explicitly as config_path
        - the "sparseia.cfg" file in the folder where the command is executed
        - a file pointed by the "SPARSEIA_CONFIG" environment variable
        - the "sparseia.cfg" in the ~/.sparseia folder
        - if no file available, fall back to default values
        The values in overrides, usually coming from the command line, take precedence over the file.
        If mnist_dir is not set, the "SPARSEIA_MNIST_DIR" environment variable is used.
        """
        if config_path is not None:
            paths = [config_path]
            if not os.path.isfile(config_path):
                msg = "Configuration file {} does not exist".format(config_path)
                logger.error(msg)
                raise ConfigError(msg)
        else:
            paths = [os.path.join(os.getcwd(), cls.CONFIG_FILE), os.getenv(cls.CONFIG_ENV),
                     os.path.join(cls.USER_CONFIG_DIR, cls.CONFIG_FILE)]

        config = {}
        for path in paths:
            if path and os.path.exists(path):
                config = cls.read_config_file(path)
                logger.info("Reading configuration from {}.".format(path))
                break

        config.update({cls.normalize_key(k): v for k, v in overrides.items() if v is not None})
        if _parse_optional_str(config.get('mnist_dir')) is None and os.getenv(cls.MNIST_ENV):
            config['mnist_dir'] = os.getenv(cls.MNIST_ENV)
        return cls(**config)

    def update_options(self, **d):
        """Returns a new ExperimentSpec with some options replaced."""
        new = dict(self.options._asdict())
        new.update(d)
        spec = self.__class__(**new)
        spec.explicit_keys = self.explicit_keys | set(spec.normalize_key(k) for k in d)
        return spec

    def algorithm_params(self, alg=None):
        """AlgorithmParams of the configured (or of the given) algorithm."""
        alg = Algorithm.normalize(alg or self.options.alg)
        o = self.options
        return AlgorithmParams(alg, q=o.q, q_g=o.q_g, q_l=o.q_l)

    def train_config(self, params=None, k=None):
        o = self.options
        return TrainConfig(k=k or o.k, params=params or self.algorithm_params(), batch_size=o.batch,
                           learning_rate=o.lr, local_steps=o.local_steps, rounds=o.rounds, seed=o.seed,
                           omega=o.omega, iid=o.iid)

    def to_config_string(self):
        lines = ["# resolved sparseia configuration"]
        for key, value in self.options._asdict().items():
            lines.append("{} = {}".format(key, _format_value(value)))
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.to_config_string()
