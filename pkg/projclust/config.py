import os
import sys
import logging


def _env_int(name, default):
    value = os.environ.get(name)
    if value is None or value.strip() == '':
        return default
    try:
        return int(value)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {name}={value!r}, using {default}")
        return default


class Config:
    """Base configuration class"""

    # Worker threads for per-center, per-block and per-trial work (0 = one per CPU)
    THREADS = _env_int('PROJCLUST_THREADS', 0)

    # Size guards for the exhaustive oracles
    BRUTE_FORCE_MAX_N = _env_int('PROJCLUST_BRUTE_FORCE_MAX_N', 15)
    MST_BRUTE_FORCE_MAX_N = _env_int('PROJCLUST_MST_BRUTE_FORCE_MAX_N', 7)

    # Max number of float64 elements materialised for one block of broadcast distances
    DISTANCE_BLOCK = _env_int('PROJCLUST_DISTANCE_BLOCK', 2 ** 22)

    # Full n x n distance matrices are O(n^2) memory and therefore opt-in
    CACHE_DISTANCES = os.environ.get('PROJCLUST_CACHE_DISTANCES', 'false').lower() in ['true', '1', 'yes']

    # Doubling estimator default
    DOUBLING_CENTERS = _env_int('PROJCLUST_DOUBLING_CENTERS', 64)

    # Experiment defaults
    DEFAULT_TRIALS = 20
    DEFAULT_D_VALUES = (5, 10, 15, 20)
    DEFAULT_EPSILON = 0.10

    LOG_LEVEL = os.environ.get('PROJCLUST_LOG_LEVEL', 'INFO').upper()
    LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'

    @classmethod
    def resolved_threads(cls):
        """Worker count after resolving 0 to the CPU count"""
        if cls.THREADS and cls.THREADS > 0:
            return cls.THREADS
        return os.cpu_count() or 1

    @classmethod
    def init_app(cls):
        """Initialize logging and process-wide singletons for this configuration"""
        from projclust.extensions import pool, runtime

        logger = logging.getLogger('projclust')
        # stdout carries the JSON reports, so log records go to stderr
        if not any(getattr(h, '_projclust', False) for h in logger.handlers):
            stream_handler = logging.StreamHandler(sys.stderr)
            stream_handler.setFormatter(logging.Formatter(cls.LOG_FORMAT))
            stream_handler._projclust = True
            logger.addHandler(stream_handler)
        logger.setLevel(getattr(logging, cls.LOG_LEVEL, logging.INFO))
        logger.propagate = False

        pool.init_app(cls)
        runtime.init_app(cls)
        logger.debug(f"projclust configured: {cls.__name__}, threads={cls.resolved_threads()}")


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.environ.get('PROJCLUST_LOG_LEVEL', 'DEBUG').upper()


class ProductionConfig(Config):
    """Production configuration, used for long experiment runs"""
    LOG_LEVEL = os.environ.get('PROJCLUST_LOG_LEVEL', 'INFO').upper()


class TestingConfig(Config):
    """Testing configuration"""
    THREADS = 1
    LOG_LEVEL = 'WARNING'
    CACHE_DISTANCES = False


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}
