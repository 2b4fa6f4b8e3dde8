from .atp_routes import router as atp_router
from .cayley_routes import router as cayley_router
from .conv_routes import router as conv_router
from .corpus_routes import router as corpus_router
from .describe_routes import router as describe_router
from .describe_routes import schema_router
from .env_routes import router as env_router
from .group_routes import router as group_router
from .hopf_routes import router as hopf_router
from .lie_routes import router as lie_router
from .loop_routes import router as loop_router
from .malcev_routes import router as malcev_router
from .suite_routes import router as suite_router

ROUTERS = [
    loop_router,
    group_router,
    atp_router,
    cayley_router,
    lie_router,
    malcev_router,
    hopf_router,
    env_router,
    conv_router,
    suite_router,
    corpus_router,
    describe_router,
    schema_router,
]

__all__ = ['ROUTERS']
