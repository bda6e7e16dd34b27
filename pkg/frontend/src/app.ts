// Hash router with a session guard; everything except login needs a token.

import { GatewayClient } from './api';
import { ActionStateStore } from './state';
import { createLoginView, createRegisterView } from './views/login';
import { createQueryView } from './views/query';
import { createSettingsView } from './views/settings';

interface Mounted {
  el: HTMLElement;
  destroy(): void;
}

export class App {
  private current: Mounted | null = null;
  private role: string | null = null;
  readonly store = new ActionStateStore();

  constructor(
    private root: HTMLElement,
    readonly client: GatewayClient,
  ) {
    window.addEventListener('hashchange', () => this.route());
  }

  start(): void {
    const token = sessionStorage.getItem('bridge_token');
    const role = sessionStorage.getItem('bridge_role');
    if (token) {
      this.client.token = token;
      this.role = role;
    }
    this.route();
  }

  private onLoggedIn = (role: string): void => {
    this.role = role;
    sessionStorage.setItem('bridge_token', this.client.token ?? '');
    sessionStorage.setItem('bridge_role', role);
    location.hash = '#/menu';
  };

  private onAuthExpired = (): void => {
    this.client.token = null;
    this.role = null;
    sessionStorage.removeItem('bridge_token');
    sessionStorage.removeItem('bridge_role');
    location.hash = '#/login';
    this.route();
  };

  private mount(view: Mounted): void {
    this.current?.destroy();
    this.current = view;
    this.root.innerHTML = '';
    this.root.appendChild(view.el);
  }

  private menuView(): Mounted {
    const el = document.createElement('section');
    el.className = 'menu-view';
    const title = document.createElement('h1');
    title.textContent = 'PACS Bridge';
    const query = document.createElement('button');
    query.textContent = 'Query & Retrieve';
    query.addEventListener('click', () => (location.hash = '#/query'));
    const settings = document.createElement('button');
    settings.textContent = 'Settings';
    settings.addEventListener('click', () => (location.hash = '#/settings'));
    const logout = document.createElement('button');
    logout.className = 'logout';
    logout.textContent = 'Log out';
    logout.addEventListener('click', this.onAuthExpired);
    el.append(title, query, settings, logout);
    return { el, destroy: () => el.remove() };
  }

  route(): void {
    const hash = location.hash || '#/menu';
    if (!this.client.token && hash !== '#/login') {
      location.hash = '#/login';
      return; // the hashchange listener re-enters route()
    }
    switch (hash) {
      case '#/login':
        this.mount(createLoginView(this.client,
                                   (result) => this.onLoggedIn(result.role)));
        break;
      case '#/query':
        this.mount(createQueryView({
          client: this.client,
          store: this.store,
          onAuthExpired: this.onAuthExpired,
        }));
        break;
      case '#/settings':
        this.mount(createSettingsView({
          client: this.client,
          onAuthExpired: this.onAuthExpired,
        }));
        break;
      case '#/register':
        // Deliberately unlinked from navigation; admin only.
        this.mount(createRegisterView(this.client, this.role));
        break;
      default:
        this.mount(this.menuView());
    }
  }
}
