"""
Common utilities and shared functionality
"""

# 导入所有子模块的功能
from .logging import *  # noqa: F401, F403
from .validation import *  # noqa: F401, F403
from .utils import *  # noqa: F401, F403
from .data import *  # noqa: F401, F403

# 创建模块级别的导入兼容性
import sys

# 导入实际的子模块
from .utils import calculations
from .utils import path_utils
from .data import table_io
from .validation import error_handling
from .validation import exceptions
from .validation import validators
from .logging import logger

# 注册模块别名，使得扁平的导入路径继续工作
sys.modules['common.calculations'] = calculations
sys.modules['common.path_utils'] = path_utils
sys.modules['common.table_io'] = table_io
sys.modules['common.error_handling'] = error_handling
sys.modules['common.exceptions'] = exceptions
sys.modules['common.validators'] = validators
sys.modules['common.logger'] = logger
