// Client plumbing and the session guard in the router.

import { afterEach, describe, expect, it } from 'vitest';

import { ApiError, GatewayClient } from '../src/api';
import { App } from '../src/app';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

afterEach(() => {
  document.body.innerHTML = '';
  sessionStorage.clear();
  location.hash = '';
});

describe('GatewayClient', () => {
  it('sends the bearer token and parses JSON', async () => {
    const seen: { url: string; headers: Record<string, string> }[] = [];
    const client = new GatewayClient('http://gw.test/', async (input, init) => {
      seen.push({
        url: String(input),
        headers: (init?.headers ?? {}) as Record<string, string>,
      });
      return jsonResponse(200, { stations: [] });
    });
    client.token = 'tok-123';
    await client.stations();
    expect(seen[0].url).toBe('http://gw.test/stations');
    expect(seen[0].headers['Authorization']).toBe('Bearer tok-123');
  });

  it('raises ApiError with the gateway error shape', async () => {
    const client = new GatewayClient('http://gw.test', async () =>
      jsonResponse(409, { code: 'not_retrieved', message: 'nothing stored',
                          detail: null }));
    client.token = 't';
    const error = await client.studyPreviews('1.2.3.1').catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(409);
    expect(error.code).toBe('not_retrieved');
    expect(error.message).toBe('nothing stored');
  });

  it('login stores the token for later calls', async () => {
    const client = new GatewayClient('http://gw.test', async () =>
      jsonResponse(200, { token: 'fresh', username: 'admin', role: 'admin',
                          expires_at: 1 }));
    await client.login('admin', 'pw');
    expect(client.token).toBe('fresh');
  });
});

describe('App routing guard', () => {
  it('redirects every route to login without a session', () => {
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = new App(root, new GatewayClient('http://gw.test',
                                                async () => jsonResponse(200, {})));
    location.hash = '#/query';
    app.start();
    expect(location.hash).toBe('#/login');
  });

  it('renders the menu when a session token exists', () => {
    sessionStorage.setItem('bridge_token', 'tok');
    sessionStorage.setItem('bridge_role', 'admin');
    const root = document.createElement('div');
    document.body.appendChild(root);
    const app = new App(root, new GatewayClient('http://gw.test',
                                                async () => jsonResponse(200, {})));
    location.hash = '#/menu';
    app.start();
    expect(root.querySelector('.menu-view')).not.toBeNull();
  });

  it('an expired session (401 from the gateway) redirects to login', async () => {
    sessionStorage.setItem('bridge_token', 'stale');
    sessionStorage.setItem('bridge_role', 'user');
    const root = document.createElement('div');
    document.body.appendChild(root);
    const client = new GatewayClient('http://gw.test', async () =>
      jsonResponse(401, { code: 'auth_failed', message: 'invalid session',
                          detail: null }));
    client.token = 'stale';
    const app = new App(root, client);
    location.hash = '#/query';
    app.start();
    // The query view verifies stations on open; the 401 must evict the session.
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(location.hash).toBe('#/login');
    expect(sessionStorage.getItem('bridge_token')).toBeNull();
    expect(client.token).toBeNull();
  });
});
