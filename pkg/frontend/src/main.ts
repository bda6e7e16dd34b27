import { GatewayClient } from './api';
import { App } from './app';
import './styles.css';

const configured = import.meta.env.VITE_GATEWAY_URL as string | undefined;
const baseUrl = configured
  ?? `${location.protocol}//${location.hostname}:8000`;

const root = document.getElementById('app');
if (!root) throw new Error('missing #app mount point');
new App(root, new GatewayClient(baseUrl)).start();
