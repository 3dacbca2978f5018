// Entry point for the browser. The service origin defaults to the page
// origin and can be overridden with ?service=http://host:port.

import { ServiceClient } from './api.js';
import { FlowApp } from './app.js';

const params = new URLSearchParams(window.location.search);
const serviceUrl = params.get('service') ?? window.location.origin;
const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app root element');
}
new FlowApp(root, new ServiceClient(serviceUrl, (url, init) => fetch(url, init)));
