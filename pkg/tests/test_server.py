import asyncio

import pytest
from aiohttp.test_utils import TestClient, TestServer

from scalar.cache.result_cache import ResultCache
from scalar.model.model_io import model_version
from scalar.services.http_server import create_app
from scalar.services.tagging_service import TaggingService


@pytest.fixture
def service(seed_model, resources):
    return TaggingService(seed_model, resources, ResultCache(None, model_version(seed_model)))


@pytest.fixture
async def client(service):
    async with TestClient(TestServer(create_app(service))) as client:
        yield client


class TestTagEndpoint:
    async def test_get_then_cached(self, client):
        response = await client.get('/tag/declaration/as_binary')
        assert response.status == 200
        body = await response.json()
        assert body['identifier'] == 'as_binary'
        assert body['context'] == 'declaration'
        assert [w['word'] for w in body['words']] == ['as', 'binary']
        assert [w['tag'] for w in body['words']] == ['P', 'N']
        assert (body['cached'], body['count']) == (False, 1)

        again = await (await client.get('/tag/declaration/as_binary')).json()
        assert (again['cached'], again['count']) == (True, 2)
        assert again['first_seen'] == body['first_seen']
        assert again['last_seen'] >= body['last_seen']

    async def test_post(self, client):
        response = await client.post('/tag', json={'identifier': 'openIfEmpty', 'context': 'function'})
        assert response.status == 200
        body = await response.json()
        assert [w['tag'] for w in body['words']] == ['V', 'CJ', 'NM']

    @pytest.mark.parametrize('context', ['banana', 'x'])
    async def test_unknown_context(self, client, context):
        response = await client.get(f'/tag/{context}/as_binary')
        assert response.status == 400
        assert (await response.json())['error'] == 'unknown-context'

    async def test_malformed_identifier(self, client):
        response = await client.get('/tag/declaration/___')
        assert response.status == 400
        assert (await response.json())['error'] == 'malformed-identifier'

    @pytest.mark.parametrize('body', ['not json', '[1, 2]', '{"identifier": "x"}', '{"identifier": 1, "context": "class"}'])
    async def test_bad_post_body(self, client, body):
        response = await client.post('/tag', data=body, headers={'Content-Type': 'application/json'})
        assert response.status == 400
        assert (await response.json())['error'] == 'bad-request'

    async def test_concurrent_requests_share_one_entry(self, client):
        responses = await asyncio.gather(*(client.get('/tag/attribute/widgetBehindCursor') for _ in range(32)))
        bodies = [await r.json() for r in responses]
        assert all(r.status == 200 for r in responses)
        assert sorted(b['count'] for b in bodies) == list(range(1, 33))
        assert sum(1 for b in bodies if not b['cached']) == 1


class TestHealth:
    async def test_cache_size_grows(self, client, seed_model):
        before = await (await client.get('/health')).json()
        assert before['status'] == 'ok'
        assert before['cache_size'] == 0
        assert before['model_version'] == model_version(seed_model)

        await client.get('/tag/class/ThingFactory')
        after = await (await client.get('/health')).json()
        assert after['cache_size'] == 1


class TestNoModel:
    async def test_service_unavailable(self, resources):
        service = TaggingService(None, resources, ResultCache(None, 'none'))
        async with TestClient(TestServer(create_app(service))) as client:
            response = await client.get('/tag/declaration/as_binary')
            assert response.status == 503
            assert (await response.json())['error'] == 'model-not-loaded'

            health = await (await client.get('/health')).json()
            assert health['status'] == 'no-model'
            assert health['model_version'] is None
