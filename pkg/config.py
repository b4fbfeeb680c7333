import os
from projclust.config import config, DevelopmentConfig, ProductionConfig, TestingConfig

def get_config():
    """Get configuration based on environment"""
    config_name = os.environ.get('PROJCLUST_CONFIG') or 'default'
    return config.get(config_name, ProductionConfig)

# Export the config dictionary for backward compatibility
__all__ = ['config', 'get_config', 'DevelopmentConfig', 'ProductionConfig', 'TestingConfig']
