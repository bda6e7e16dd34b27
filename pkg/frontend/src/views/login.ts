// Login page, plus the unlinked admin-only registration page.

import { ApiError, GatewayClient, LoginResult } from '../api';

export function createLoginView(
  client: GatewayClient,
  onLoggedIn: (result: LoginResult) => void,
): { el: HTMLElement; destroy(): void } {
  const el = document.createElement('section');
  el.className = 'login-view';
  const form = document.createElement('form');
  const title = document.createElement('h1');
  title.textContent = 'PACS Bridge';
  const username = document.createElement('input');
  username.name = 'username';
  username.placeholder = 'username';
  username.autocomplete = 'username';
  const password = document.createElement('input');
  password.name = 'password';
  password.type = 'password';
  password.placeholder = 'password';
  password.autocomplete = 'current-password';
  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.textContent = 'Log in';
  const error = document.createElement('p');
  error.className = 'inline-error';
  form.append(title, username, password, submit, error);
  el.appendChild(form);

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    error.textContent = '';
    client.login(username.value, password.value)
      .then((result) => onLoggedIn(result))
      .catch((err) => {
        error.textContent = err instanceof ApiError && err.status === 401
          ? 'invalid credentials'
          : `gateway error: ${err instanceof Error ? err.message : err}`;
      });
  });

  return { el, destroy: () => el.remove() };
}

export function createRegisterView(
  client: GatewayClient,
  role: string | null,
): { el: HTMLElement; destroy(): void } {
  const el = document.createElement('section');
  el.className = 'register-view';
  if (role !== 'admin') {
    const note = document.createElement('p');
    note.textContent = 'user registration is restricted to the admin account';
    el.appendChild(note);
    return { el, destroy: () => el.remove() };
  }
  const form = document.createElement('form');
  const username = document.createElement('input');
  username.placeholder = 'new username';
  const password = document.createElement('input');
  password.type = 'password';
  password.placeholder = 'password';
  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.textContent = 'Create user';
  const message = document.createElement('p');
  message.className = 'inline-error';
  form.append(username, password, submit, message);
  el.appendChild(form);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    client.createUser(username.value, password.value)
      .then((record) => {
        message.textContent = `created ${record.username}`;
        form.reset();
      })
      .catch((err) => {
        message.textContent = err instanceof Error ? err.message : String(err);
      });
  });
  return { el, destroy: () => el.remove() };
}
