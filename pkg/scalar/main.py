import asyncio
import logging
import signal
import sys

from aiohttp import web

from scalar.cache.cache_factory import get_cache
from scalar.config.config import ResourceConfig, ServerConfig, config
from scalar.model.model_io import load_model, model_version
from scalar.services.http_server import create_app
from scalar.services.resources import load_resources
from scalar.services.tagging_service import TaggingService

logger = logging.getLogger(__name__)


class TaggerServer:
    def __init__(self, service: TaggingService, server_config: ServerConfig):
        self.service = service
        self.server_config = server_config
        self.runner: web.AppRunner | None = None
        self.running = False
        self._flush_task: asyncio.Task | None = None

    async def start(self):
        """Start the HTTP server."""
        logger.info('Starting identifier tagging server...')

        self.runner = web.AppRunner(create_app(self.service))
        await self.runner.setup()
        site = web.TCPSite(self.runner, self.server_config.host, self.server_config.port)
        await site.start()

        # Schedule cache flushing
        self.running = True
        self._flush_task = asyncio.create_task(self.periodic_flush())

        logger.info(f'Serving on http://{self.server_config.host}:{self.server_config.port}')

    async def periodic_flush(self):
        """Periodically persist the result cache."""
        while self.running:
            try:
                await asyncio.sleep(self.server_config.cache_flush_interval_seconds)
                await asyncio.to_thread(self.service.flush_cache)

                health = self.service.health()
                logger.info(f'Stats - Cached identifiers: {health["cache_size"]}, uptime {health["uptime_seconds"]}s')

            except asyncio.CancelledError:
                break
            except Exception as e:
                logger.error(f'Error in periodic flush: {e}')

    async def stop(self):
        """Stop the server."""
        logger.info('Stopping server...')
        self.running = False

        if self._flush_task is not None:
            self._flush_task.cancel()
            await asyncio.gather(self._flush_task, return_exceptions=True)

        if self.runner is not None:
            await self.runner.cleanup()

        # Final flush
        await asyncio.to_thread(self.service.flush_cache)

        logger.info('Server stopped')


def build_service(model_path: str, resource_config: ResourceConfig, cache_file: str | None) -> TaggingService:
    """Load model, resources and cache; a missing model leaves the service answering 503."""
    try:
        model = load_model(model_path)
    except Exception as e:
        logger.error(f'Model not loaded: {e}')
        model = None

    resources = load_resources(resource_config)
    version = model_version(model) if model is not None else 'none'
    cache = get_cache(cache_file, version)
    return TaggingService(model, resources, cache)


async def main(
    model_path: str | None = None,
    resource_config: ResourceConfig | None = None,
    server_config: ServerConfig | None = None,
):
    """Main function."""
    server_config = server_config or config.server
    service = build_service(model_path or config.model.model_path, resource_config or config.resources, server_config.cache_file)
    server = TaggerServer(service, server_config)
    shutdown_event = asyncio.Event()

    # Set up signal handlers
    def signal_handler(sig, frame):
        logger.info('Received interrupt signal')
        shutdown_event.set()

    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)

    try:
        # Start server
        await server.start()

        # Keep running until shutdown signal
        await shutdown_event.wait()

        # Graceful shutdown
        logger.info('Initiating graceful shutdown...')
        await server.stop()

    except Exception as e:
        logger.error(f'Fatal error: {e}')
        await server.stop()
        sys.exit(1)


if __name__ == '__main__':
    from scalar.utils import setup_logging

    setup_logging(config.app.log_level, config.app.log_dir)
    asyncio.run(main())
