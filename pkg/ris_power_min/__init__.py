""" Initializations """
import logging

from ris_power_min.config.service_settings import ServiceSettings

CONFIG = ServiceSettings()

# Log the conic back end used for all semidefinite programs
logger = logging.getLogger(__name__)
logger.info('Configured SDP solver is %s', CONFIG.sdp.solver)
