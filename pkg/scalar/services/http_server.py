import asyncio
import logging

from aiohttp import web

from scalar.errors import MalformedIdentifierError, ModelNotLoadedError
from scalar.services.tagging_service import TaggingService

logger = logging.getLogger(__name__)

SERVICE_KEY = web.AppKey('tagging_service', TaggingService)

routes = web.RouteTableDef()


def _error(status: int, kind: str, message: str) -> web.Response:
    return web.json_response({'error': kind, 'message': message}, status=status)


async def _tag(request: web.Request, identifier: str, context: str) -> web.Response:
    service = request.app[SERVICE_KEY]
    try:
        # Tagging is CPU-bound; the cache serialises concurrent updates to the same key
        response = await asyncio.to_thread(service.tag, identifier, context)
    except MalformedIdentifierError as e:
        return _error(400, 'malformed-identifier', str(e))
    except ModelNotLoadedError as e:
        return _error(503, 'model-not-loaded', str(e))
    except ValueError as e:
        return _error(400, 'unknown-context', str(e))
    except Exception as e:
        logger.error(f'Error tagging {identifier!r} ({context}): {e}')
        return _error(500, 'internal-error', 'Tagging failed')
    return web.json_response(response.to_dict())


@routes.get('/tag/{context}/{identifier}')
async def handle_tag_request(request: web.Request) -> web.Response:
    return await _tag(request, request.match_info['identifier'], request.match_info['context'])


@routes.post('/tag')
async def handle_tag_post(request: web.Request) -> web.Response:
    try:
        body = await request.json()
    except ValueError:
        return _error(400, 'bad-request', 'Body must be a JSON object')
    if not isinstance(body, dict) or not isinstance(body.get('identifier'), str) or not isinstance(body.get('context'), str):
        return _error(400, 'bad-request', 'Body needs string fields "identifier" and "context"')
    return await _tag(request, body['identifier'], body['context'])


@routes.get('/health')
async def handle_health(request: web.Request) -> web.Response:
    return web.json_response(request.app[SERVICE_KEY].health())


def create_app(service: TaggingService) -> web.Application:
    app = web.Application()
    app[SERVICE_KEY] = service
    app.add_routes(routes)
    return app
