import pytest

from app import app


@pytest.fixture
def client():
    app.config['TESTING'] = True
    with app.test_client() as client:
        yield client


def test_health_check(client):
    response = client.get('/')
    assert response.status_code == 200
    data = response.get_json()
    assert data['status'] == 'healthy'
    assert data['certification_range'] == [16, 24]


def test_verify_algebra(client):
    response = client.get('/verify-algebra')
    assert response.status_code == 200
    data = response.get_json()
    assert data['status'] == 'success'
    assert 'timestamp' in data


def test_certificate(client):
    response = client.get('/certificate/17')
    assert response.status_code == 200
    data = response.get_json()
    assert data['verdict'] == 'not_sos'
    assert data['certificate']['farkas_row']


def test_certificate_out_of_range(client):
    response = client.get('/certificate/12')
    assert response.status_code == 400
    assert response.get_json()['error_code'] == 'INVALID_REQUEST'


def test_gap_table(client):
    response = client.get('/gap-table?k_from=16&k_to=17')
    assert response.status_code == 200
    rows = response.get_json()['rows']
    assert [row['k'] for row in rows] == [16, 17]
    assert rows[1]['gap'] == '255/127'
    assert rows[1]['gap_gt_2'] is True
    assert rows[0]['gap_gt_2'] is False


@pytest.mark.parametrize('query', ['k_from=x', 'k_from=1&k_to=3', 'k_from=5&k_to=4'])
def test_gap_table_bad_query(client, query):
    response = client.get(f'/gap-table?{query}')
    assert response.status_code == 400


def test_stable_set(client):
    response = client.post('/dense/stable-set', json={'n': 4, 'edges': []})
    assert response.status_code == 200
    report = response.get_json()['report']
    assert report['alpha'] == 4
    assert report['min'] == pytest.approx(0.25, abs=1e-4)


def test_stable_set_bad_requests(client):
    assert client.post('/dense/stable-set', data='n=3').status_code == 400
    assert client.post('/dense/stable-set', json={'n': 3}).status_code == 400
    assert client.post('/dense/stable-set', json={'n': 3, 'edges': [[0, 5]]}).status_code == 400
    assert client.post('/dense/stable-set', json={'n': 9, 'edges': []}).status_code == 400


def test_not_found(client):
    response = client.get('/nowhere')
    assert response.status_code == 404
    assert response.get_json()['error_code'] == 'NOT_FOUND'


def test_motzkin_report(client):
    response = client.get('/dense/motzkin')
    assert response.status_code == 200
    report = response.get_json()['report']
    assert report['form'] == 'motzkin'
    assert report['sos_bound'] < 0
    assert report['min'] == pytest.approx(0.0, abs=1e-6)
    assert 1.0 <= report['gap'] <= 1.01


@pytest.mark.parametrize('body', ['null', '[1, 2]', '3', '{"n": 3,'])
def test_stable_set_body_not_an_object(client, body):
    response = client.post('/dense/stable-set', data=body, content_type='application/json')
    assert response.status_code == 400
    assert response.get_json()['error_code'] == 'INVALID_REQUEST'
