"""
Unit tests for the Flask JSON API
"""
import shutil
import tempfile
import unittest
from unittest.mock import patch

import app as api
from check_ledger import CheckLedger


CUBIC = {'field': 'Q', 'vars': ['x0', 'x1', 'x2'], 'poly': 'x0^3 + x1^3 + x2^3'}


class TestAPIEndpoints(unittest.TestCase):
    """Test cases for the JSON endpoints"""

    def setUp(self):
        """Set up a test client backed by a temporary ledger"""
        self.temp_dir = tempfile.mkdtemp()
        self.ledger = CheckLedger(logs_directory=self.temp_dir)
        patcher = patch.object(api, 'check_ledger', self.ledger)
        patcher.start()
        self.addCleanup(patcher.stop)
        healthy = patch.object(api, 'components_healthy', True)
        healthy.start()
        self.addCleanup(healthy.stop)
        api.app.config['TESTING'] = True
        self.client = api.app.test_client()

    def tearDown(self):
        """Clean up temporary directory"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_health(self):
        """Test the liveness endpoint"""
        response = self.client.get('/api/health')
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data['status'], 'OK')
        self.assertEqual(data['ledger']['status'], 'CLEAN')

    def test_jacobian(self):
        """Test the Jacobian ring of the Fermat cubic"""
        response = self.client.post('/api/jacobian', json=CUBIC)
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data['hilbert_function'], [1, 3, 3, 1])
        self.assertEqual(data['socle_degree'], 3)

    def test_jacobian_comma_strings(self):
        """Test vars and weights given as comma-separated strings"""
        body = {'vars': 'x0,x1,x2', 'weights': '1,1,2', 'poly': 'x0^4 + x1^4 + x2^2'}
        response = self.client.post('/api/jacobian', json=body)
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data['weights'], [1, 1, 2])
        self.assertTrue(data['cover_identity'])

    def test_chi(self):
        """Test chi of the plane quartic"""
        body = {'vars': ['x0', 'x1', 'x2'], 'poly': 'x0^4 + x1^4 + x2^4', 'cone': True}
        response = self.client.post('/api/chi', json=body)
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data['chi']['hyperbolic'], -2)
        self.assertIn('chi_c_cone', data)

    def test_conductor_records(self):
        """Test that a conductor check is recorded in the ledger"""
        response = self.client.post('/api/conductor', json=dict(CUBIC, name='fermat cubic'))
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertTrue(data['passed'])
        self.assertEqual(data['check_id'], 'CHK_001')

        checks = self.client.get('/api/checks?limit=5').get_json()
        self.assertEqual(checks['total_count'], 1)
        self.assertEqual(checks['checks'][0]['family'], 'fermat cubic')

    def test_conductor_without_record(self):
        """Test record=false leaves the ledger untouched"""
        response = self.client.post('/api/conductor', json=dict(CUBIC, record=False))
        self.assertEqual(response.status_code, 200)
        self.assertNotIn('check_id', response.get_json())
        self.assertEqual(self.ledger.get_all_checks(), [])

    def test_conductor_write_failure_warns(self):
        """Test that a ledger write error comes back as a warning, not a 500"""
        with patch('check_ledger.json.dump', side_effect=OSError('No space left on device')), patch('sys.stdout'):
            response = self.client.post('/api/conductor', json=CUBIC)
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertTrue(data['passed'])
        self.assertNotIn('check_id', data)
        self.assertIn('No space left on device', data['ledger_warning'])

    def test_dim0(self):
        """Test the zero-dimensional identity"""
        response = self.client.post('/api/dim0', json={'e': 3, 'a': '2'})
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.get_json()['equal'])

    def test_statistics_and_reset(self):
        """Test statistics after a check and a reset"""
        self.client.post('/api/conductor', json=CUBIC)
        stats = self.client.get('/api/statistics').get_json()
        self.assertEqual(stats['check_statistics']['total_checks'], 1)
        self.assertEqual(stats['ledger']['status'], 'CLEAN')

        response = self.client.post('/api/reset')
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.get_json()['success'])
        self.assertEqual(self.ledger.get_all_checks(), [])


class TestAPIErrors(unittest.TestCase):
    """Test cases for error mapping"""

    def setUp(self):
        """Set up a test client"""
        api.app.config['TESTING'] = True
        self.client = api.app.test_client()

    def test_syntax_error_is_400(self):
        """Test user input errors map to 400"""
        response = self.client.post('/api/jacobian', json=dict(CUBIC, poly='x0 + + x1'))
        self.assertEqual(response.status_code, 400)
        data = response.get_json()
        self.assertEqual(data['kind'], 'user_input')
        self.assertIn('offset 5', data['error'])

    def test_missing_body_is_400(self):
        """Test a request without a JSON object"""
        response = self.client.post('/api/chi', data='not json', content_type='text/plain')
        self.assertEqual(response.status_code, 400)

    def test_singular_is_422(self):
        """Test precondition failures map to 422"""
        response = self.client.post('/api/chi', json=dict(CUBIC, poly='x0^3 + x1^3'))
        self.assertEqual(response.status_code, 422)
        self.assertEqual(response.get_json()['kind'], 'precondition')

    def test_missing_ledger_is_500(self):
        """Test checks without a ledger"""
        with patch.object(api, 'check_ledger', None):
            response = self.client.get('/api/checks')
        self.assertEqual(response.status_code, 500)

    def test_conductor_without_ledger_warns(self):
        """Test that a conductor check still returns its report without a ledger"""
        body = {'vars': ['x0', 'x1'], 'poly': 'x0^2 + x1^2'}
        with patch.object(api, 'check_ledger', None):
            response = self.client.post('/api/conductor', json=body)
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertTrue(data['passed'])
        self.assertNotIn('check_id', data)
        self.assertIn('ledger', data['ledger_warning'])

    def test_non_integer_dimension_is_400(self):
        """Test that a non-integer n is a user input error"""
        for n in ('two', 1.5, [1]):
            response = self.client.post('/api/chi', json=dict(CUBIC, n=n))
            self.assertEqual(response.status_code, 400, n)
            self.assertEqual(response.get_json()['kind'], 'user_input')

    def test_integer_string_dimension(self):
        """Test that n given as a numeric string is accepted"""
        response = self.client.post('/api/chi', json=dict(CUBIC, n='1'))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.get_json()['dim'], 1)


if __name__ == '__main__':
    unittest.main(verbosity=2)
